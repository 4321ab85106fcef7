use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{Coord, Instance, Point, SubEdge, TerrainPos};
use crate::oracle::verify_coverage;
use crate::preprocess::marks_convex_hull;
use crate::sweep::Solution;
use crate::visibility::{edge_right_limit, interval_at, interval_of_point, left_bound, right_bound, VisibilityInterval};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessKind {
    Vertex,
    /// A point just left of the position, realized with a concrete epsilon on demand.
    EpsLeft,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Witness {
    pub kind: WitnessKind,
    pub edge: usize,
    pub t: Coord,
}

impl Witness {
    fn vertex(inst: &Instance, k: usize) -> Witness {
        let TerrainPos { edge, t } = inst.terrain.vertex_pos(k);
        Witness { kind: WitnessKind::Vertex, edge, t }
    }

    fn eps_left(edge: usize, t: Coord) -> Witness {
        Witness { kind: WitnessKind::EpsLeft, edge, t }
    }

    /// Exact point for a parameter offset `eps` (ignored for vertices).
    pub fn realize(&self, inst: &Instance, eps: &Coord) -> Point {
        match self.kind {
            WitnessKind::Vertex => inst.terrain.point_at(self.edge, &self.t),
            WitnessKind::EpsLeft => inst.terrain.point_at(self.edge, &(&self.t - eps)),
        }
    }

    /// Visibility interval in the limit `eps -> 0`.
    pub fn limit_interval(&self, inst: &Instance) -> VisibilityInterval {
        let pos = TerrainPos { edge: self.edge, t: self.t.clone() };
        match self.kind {
            WitnessKind::Vertex => interval_at(inst, &pos),
            WitnessKind::EpsLeft if self.t == Coord::one() => {
                let v = inst.terrain.vertex(self.edge + 1);
                VisibilityInterval { l: left_bound(inst, v), r: edge_right_limit(inst, self.edge) }
            }
            WitnessKind::EpsLeft => interval_at(inst, &pos),
        }
    }
}

/// The sub-edges whose closing produced one guard.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventContext {
    pub guard: Coord,
    pub triggers: Vec<SubEdge>,
}

/// Witness for one guard event.
///
/// Whole-edge events prefer the left vertex of the rightmost edge running from a
/// valley up to a peak; events raised only by split edges use a point just left
/// of the split boundary.
pub fn place_witness(inst: &Instance, ctx: &EventContext, prev: Option<&Coord>) -> Result<Witness> {
    if ctx.triggers.is_empty() {
        return Err(Error::EmptyEventContext);
    }
    let t = &inst.terrain;
    let mut candidates = Vec::new();
    let wholes: Vec<&SubEdge> = ctx.triggers.iter().filter(|s| s.whole).rev().collect();
    if let Some(last) = wholes.first() {
        for s in &wholes {
            let j = s.edge;
            if t.is_convex(j) && t.is_reflex(j + 1) {
                candidates.push(Witness::vertex(inst, j));
                break;
            }
        }
        let j = last.edge;
        if t.is_convex(j) {
            candidates.push(Witness::vertex(inst, j));
        }
        if right_bound(inst, t.vertex(j + 1)) == ctx.guard {
            candidates.push(Witness::vertex(inst, j + 1));
        }
        candidates.push(Witness::eps_left(j, Coord::one()));
    } else {
        let s = ctx.triggers.iter().max_by_key(|s| s.edge).expect("non-empty");
        candidates.push(Witness::eps_left(s.edge, s.t_end.clone()));
    }
    for s in ctx.triggers.iter().rev() {
        if s.whole {
            candidates.push(Witness::vertex(inst, s.edge));
        }
        candidates.push(Witness::eps_left(s.edge, s.t_end.clone()));
    }
    let first = candidates[0].clone();
    Ok(candidates
        .into_iter()
        .find(|w| fits_strip(inst, w, &ctx.guard, prev))
        .unwrap_or(first))
}

/// Limit interval lies in `(prev, guard]` and reaches `guard`.
fn fits_strip(inst: &Instance, w: &Witness, guard: &Coord, prev: Option<&Coord>) -> bool {
    let iv = w.limit_interval(inst);
    let left_ok = match (prev, w.kind) {
        (None, _) => true,
        (Some(p), WitnessKind::Vertex) => &iv.l > p,
        // the realized point sits strictly left of a point first seen by `prev`
        (Some(p), WitnessKind::EpsLeft) => &iv.l >= p && !sees_limit_from(inst, w, p),
    };
    left_ok && &iv.r == guard
}

/// Whether the previous guard still sees points just left of an EpsLeft position.
fn sees_limit_from(inst: &Instance, w: &Witness, p: &Coord) -> bool {
    // l is continuous inside an edge and l(1-) equals l at the right vertex, so the
    // limit equals `p` only when `p` saw the boundary point itself; points to its
    // left are unseen exactly when the left bound just left of it exceeds `p`
    let probe = inst.terrain.point_at(w.edge, &(&w.t - &base_eps(inst, w, &marks_on(inst, w.edge))));
    &left_bound(inst, &probe) <= p
}

fn marks_on(inst: &Instance, j: usize) -> Vec<Coord> {
    marks_convex_hull(&inst.terrain).on_edge(j).iter().map(|m| m.t.clone()).collect()
}

/// Half the parameter distance to the nearest mark or edge start left of `w`.
fn base_eps(_inst: &Instance, w: &Witness, marks: &[Coord]) -> Coord {
    let left = marks.iter().filter(|m| *m < &w.t).max().cloned().unwrap_or_else(Coord::zero);
    &(&w.t - &left) / &Coord::from_int(2)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub guards: Vec<Coord>,
    pub witness_points: Vec<Point>,
    pub intervals: Vec<VisibilityInterval>,
    /// Parameter offsets used for EpsLeft witnesses.
    pub eps: Vec<Option<Coord>>,
    pub counts_match: bool,
    pub pairwise_disjoint: bool,
    pub coverage_ok: bool,
    /// Every witness interval contains its own guard and no other.
    pub strips_ok: bool,
}

impl Certificate {
    pub fn valid(&self) -> bool {
        self.counts_match && self.pairwise_disjoint && self.coverage_ok
    }
}

pub fn certify(solution: &Solution, inst: &Instance) -> Certificate {
    certify_scaled(solution, inst, &Coord::one())
}

/// Certification with every base epsilon multiplied by `scale`.
pub fn certify_scaled(solution: &Solution, inst: &Instance, scale: &Coord) -> Certificate {
    certify_parts_scaled(&solution.guards, &solution.witnesses, inst, scale)
}

/// Certifies a guard set against symbolic witnesses, without a trace.
pub fn certify_parts(guards: &[Coord], witnesses: &[Witness], inst: &Instance) -> Certificate {
    certify_parts_scaled(guards, witnesses, inst, &Coord::one())
}

pub fn certify_parts_scaled(guards: &[Coord], ws: &[Witness], inst: &Instance, scale: &Coord) -> Certificate {
    let guards = guards.to_vec();
    let marks = marks_convex_hull(&inst.terrain);
    let m = ws.len();
    let mut points: Vec<Point> = vec![Point::new(0, 0); m];
    let mut intervals: Vec<VisibilityInterval> =
        vec![VisibilityInterval { l: Coord::zero(), r: Coord::zero() }; m];
    let mut eps: Vec<Option<Coord>> = vec![None; m];
    let two = Coord::from_int(2);
    // right to left, so each EpsLeft witness can shrink until it clears its right neighbour
    for i in (0..m).rev() {
        let w = &ws[i];
        let out_of_range = w.edge >= inst.terrain.num_edges()
            || w.t.is_negative()
            || w.t > Coord::one()
            || (w.kind == WitnessKind::EpsLeft && !w.t.is_positive());
        if out_of_range {
            // a malformed witness certifies nothing
            points[i] = inst.altitude.point(&inst.altitude.x_min);
            intervals[i] = VisibilityInterval { l: inst.altitude.x_min.clone(), r: inst.altitude.x_max.clone() };
            continue;
        }
        match w.kind {
            WitnessKind::Vertex => {
                points[i] = w.realize(inst, &Coord::zero());
                intervals[i] = interval_of_point(inst, &points[i]);
            }
            WitnessKind::EpsLeft => {
                let ts: Vec<Coord> = marks.on_edge(w.edge).iter().map(|mk| mk.t.clone()).collect();
                let mut e = &base_eps(inst, w, &ts) * scale;
                let mut found = None;
                for _ in 0..64 {
                    let p = w.realize(inst, &e);
                    let iv = interval_of_point(inst, &p);
                    let clear = i + 1 == m || iv.r < intervals[i + 1].l;
                    if clear {
                        found = Some((p, iv));
                        break;
                    }
                    e = &e / &two;
                }
                let (p, iv) = found.unwrap_or_else(|| {
                    let p = w.realize(inst, &e);
                    let iv = interval_of_point(inst, &p);
                    (p, iv)
                });
                points[i] = p;
                intervals[i] = iv;
                eps[i] = Some(e);
            }
        }
    }
    let counts_match = ws.len() == guards.len();
    let mut sorted: Vec<&VisibilityInterval> = intervals.iter().collect();
    sorted.sort_by(|a, b| a.l.cmp(&b.l));
    let pairwise_disjoint = sorted.windows(2).all(|w| w[0].r < w[1].l);
    let guard_points: Vec<Point> = guards.iter().map(|g| inst.altitude.point(g)).collect();
    let coverage_ok = guards.iter().all(|g| inst.altitude.contains_x(g)) && verify_coverage(&guard_points, inst);
    let strips_ok = counts_match
        && intervals.iter().enumerate().all(|(i, iv)| {
            guards.iter().enumerate().all(|(k, g)| iv.contains(g) == (k == i))
        });
    Certificate {
        guards,
        witness_points: points,
        intervals,
        eps,
        counts_match,
        pairwise_disjoint,
        coverage_ok,
        strips_ok,
    }
}
