use std::fmt::Write;

use crate::geom::{Coord, Instance, Point};
use crate::preprocess::edge_events;
use crate::sweep::{default_marks, Solution};
use crate::witness::Certificate;

#[derive(Debug, Clone, PartialEq)]
pub struct RenderOptions {
    pub width: f64,
    /// Ticks for s, o and c of every edge on the altitude line.
    pub events: bool,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions { width: 800.0, events: false }
    }
}

struct Frame {
    x0: f64,
    y1: f64,
    sx: f64,
    sy: f64,
    pad: f64,
}

impl Frame {
    fn x(&self, x: &Coord) -> f64 {
        self.pad + (x.to_f64() - self.x0) * self.sx
    }

    fn y(&self, y: &Coord) -> f64 {
        self.pad + (self.y1 - y.to_f64()) * self.sy
    }
}

/// Static SVG of an instance and, optionally, a solution and its certificate.
/// Output depends only on the inputs.
pub fn render_svg(inst: &Instance, solution: Option<&Solution>, cert: Option<&Certificate>, opts: &RenderOptions) -> String {
    let t = &inst.terrain;
    let a = &inst.altitude;
    let y0 = t.vertices().iter().map(|v| &v.y).min().expect("non-empty").to_f64();
    let y1 = a.y.to_f64();
    let x0 = a.x_min.to_f64();
    let span_x = (a.x_max.to_f64() - x0).max(f64::MIN_POSITIVE);
    let span_y = (y1 - y0).max(span_x * 0.05);
    let pad = 20.0;
    let inner_w = opts.width - 2.0 * pad;
    let inner_h = (inner_w * span_y / span_x).clamp(inner_w * 0.2, inner_w);
    let f = Frame { x0, y1, sx: inner_w / span_x, sy: inner_h / span_y, pad };
    let (w, h) = (opts.width, inner_h + 2.0 * pad);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.3}" height="{h:.3}" viewBox="0 0 {w:.3} {h:.3}">"#
    );
    let _ = writeln!(s, r#"<rect class="background" x="0" y="0" width="{w:.3}" height="{h:.3}" fill="white"/>"#);
    if let Some(c) = cert {
        for (i, iv) in c.intervals.iter().enumerate() {
            let (l, r) = (f.x(&iv.l), f.x(&iv.r));
            let _ = writeln!(
                s,
                r##"<rect class="strip" data-witness="{i}" x="{l:.3}" y="{pad:.3}" width="{:.3}" height="{inner_h:.3}" fill="#4a90d9" fill-opacity="0.15"/>"##,
                r - l
            );
        }
    }
    let pts: Vec<String> = t.vertices().iter().map(|v| format!("{:.3},{:.3}", f.x(&v.x), f.y(&v.y))).collect();
    let _ = writeln!(s, r#"<polyline class="terrain" points="{}" fill="none" stroke="black" stroke-width="1.5"/>"#, pts.join(" "));
    let ya = f.y(&a.y);
    let _ = writeln!(
        s,
        r#"<line class="altitude" x1="{:.3}" y1="{ya:.3}" x2="{:.3}" y2="{ya:.3}" stroke="red" stroke-width="1.5"/>"#,
        f.x(&a.x_min),
        f.x(&a.x_max)
    );
    if opts.events {
        let ev = edge_events(inst, &default_marks(inst));
        for (j, e) in ev.iter().enumerate() {
            for (name, x, dy, colour) in [("s", &e.s, 4.0, "#888888"), ("o", &e.o, 8.0, "#2a9d2a"), ("c", &e.c, 12.0, "#d97a00")] {
                let px = f.x(x);
                let _ = writeln!(
                    s,
                    r#"<line class="event event-{name}" data-edge="{j}" x1="{px:.3}" y1="{ya:.3}" x2="{px:.3}" y2="{:.3}" stroke="{colour}" stroke-width="1"/>"#,
                    ya + dy
                );
            }
        }
    }
    if let Some(sol) = solution {
        for (i, g) in sol.guards.iter().enumerate() {
            let _ = writeln!(
                s,
                r#"<circle class="guard" data-index="{i}" cx="{:.3}" cy="{ya:.3}" r="4" fill="red"/>"#,
                f.x(g)
            );
        }
        let wps: Vec<Point> = match cert {
            Some(c) => c.witness_points.clone(),
            None => sol.witnesses.iter().map(|w| w.realize(inst, &Coord::zero())).collect(),
        };
        for (i, p) in wps.iter().enumerate() {
            let _ = writeln!(
                s,
                r##"<rect class="witness" data-index="{i}" x="{:.3}" y="{:.3}" width="7" height="7" fill="#1f5fa8"/>"##,
                f.x(&p.x) - 3.5,
                f.y(&p.y) - 3.5
            );
        }
    }
    s.push_str("</svg>\n");
    s
}
