use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{cross, Coord, Instance, Point, Terrain};
use crate::sweep::Solution;
use crate::witness::{certify_parts, Certificate};

/// Closed vertex ring, either orientation, without a repeated closing vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Polygon {
    ring: Vec<Point>,
}

impl Polygon {
    pub fn new(mut ring: Vec<Point>) -> Result<Polygon> {
        if ring.len() >= 2 && ring.first() == ring.last() {
            ring.pop();
        }
        if ring.len() < 3 {
            return Err(Error::InvalidPolygon(format!("need at least 3 vertices, got {}", ring.len())));
        }
        for i in 0..ring.len() {
            if ring[i] == ring[(i + 1) % ring.len()] {
                return Err(Error::InvalidPolygon(format!("zero-length side at vertex {}", i + 1)));
            }
        }
        Ok(Polygon { ring })
    }

    pub fn ring(&self) -> &[Point] {
        &self.ring
    }

    fn side(&self, i: usize) -> (&Point, &Point) {
        (&self.ring[i], &self.ring[(i + 1) % self.ring.len()])
    }
}

/// Uni-monotone polygon split into its horizontal top `H` and lower chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniMonotonePolygon {
    pub polygon: Polygon,
    /// Ring index of the side forming `H`.
    pub h_side: usize,
    pub h: Coord,
    pub lower_chain: Vec<Point>,
}

impl UniMonotonePolygon {
    pub fn new(polygon: Polygon) -> Result<UniMonotonePolygon> {
        let ring = polygon.ring();
        let n = ring.len();
        let x_min = ring.iter().map(|p| &p.x).min().expect("non-empty").clone();
        let x_max = ring.iter().map(|p| &p.x).max().expect("non-empty").clone();
        let y_max = ring.iter().map(|p| &p.y).max().expect("non-empty").clone();
        let h_side = (0..n)
            .find(|&i| {
                let (a, b) = polygon.side(i);
                a.y == b.y && a.y == y_max && a.x.clone().min(b.x.clone()) == x_min && a.x.clone().max(b.x.clone()) == x_max
            })
            .ok_or_else(|| {
                Error::InvalidPolygon("no horizontal side spans the x-range on top of the polygon".into())
            })?;
        // walk from the end of H around to its start
        let mut chain: Vec<Point> = (1..=n).map(|k| ring[(h_side + k) % n].clone()).collect();
        if chain[0].x > chain[chain.len() - 1].x {
            chain.reverse();
        }
        trim_vertical_side(&mut chain)?;
        chain.reverse();
        trim_vertical_side(&mut chain)?;
        chain.reverse();
        for w in chain.windows(2) {
            if w[0].x >= w[1].x {
                return Err(Error::InvalidPolygon(format!(
                    "lower chain is not x-monotone at {} -> {}",
                    w[0], w[1]
                )));
            }
        }
        Ok(UniMonotonePolygon { h: y_max, h_side, lower_chain: chain, polygon })
    }
}

/// Drops a vertical end side, keeping its lowest vertex.
fn trim_vertical_side(chain: &mut Vec<Point>) -> Result<()> {
    let mut k = 0;
    while k + 1 < chain.len() && chain[k + 1].x == chain[0].x {
        if chain[k + 1].y >= chain[k].y {
            return Err(Error::InvalidPolygon(format!("vertical side folds back at {}", chain[k + 1])));
        }
        k += 1;
    }
    chain.drain(..k);
    if chain.len() < 2 {
        return Err(Error::InvalidPolygon("lower chain degenerates to a point".into()));
    }
    Ok(())
}

/// Exact affine map sending a mountain's base onto the x-axis, chain below.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MountainTransform {
    pub origin: Point,
    pub dx: Coord,
    pub dy: Coord,
    pub reflect: bool,
}

impl MountainTransform {
    pub fn forward(&self, p: &Point) -> Point {
        let u = &p.x - &self.origin.x;
        let v = &p.y - &self.origin.y;
        let x = &(&self.dx * &u) + &(&self.dy * &v);
        let y = &(&self.dx * &v) - &(&self.dy * &u);
        Point { x, y: if self.reflect { -y } else { y } }
    }

    pub fn inverse(&self, q: &Point) -> Point {
        let y = if self.reflect { -&q.y } else { q.y.clone() };
        let d2 = &(&self.dx * &self.dx) + &(&self.dy * &self.dy);
        let u = &(&(&self.dx * &q.x) - &(&self.dy * &y)) / &d2;
        let v = &(&(&self.dy * &q.x) + &(&self.dx * &y)) / &d2;
        Point { x: &u + &self.origin.x, y: &v + &self.origin.y }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BackMap {
    Horizontal,
    Affine(MountainTransform),
}

impl BackMap {
    /// Maps a point of the terrain frame back into the polygon frame.
    pub fn point(&self, p: &Point) -> Point {
        match self {
            BackMap::Horizontal => p.clone(),
            BackMap::Affine(m) => m.inverse(p),
        }
    }
}

/// Terrain instance derived from a polygon plus the way back.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Adapted {
    pub polygon: Polygon,
    pub instance: Instance,
    pub back: BackMap,
    /// The polygon in the terrain frame, uni-monotone with `H` on top.
    pub framed: UniMonotonePolygon,
}

impl Adapted {
    pub fn guard_point(&self, x: &Coord) -> Point {
        self.back.point(&self.instance.altitude.point(x))
    }

    pub fn guard_points(&self, solution: &Solution) -> Vec<Point> {
        solution.guards.iter().map(|g| self.guard_point(g)).collect()
    }
}

pub fn from_uni_monotone(p: &Polygon) -> Result<Adapted> {
    let um = UniMonotonePolygon::new(p.clone())?;
    let instance = to_instance(&um)?;
    Ok(Adapted { polygon: p.clone(), instance, back: BackMap::Horizontal, framed: um })
}

fn to_instance(um: &UniMonotonePolygon) -> Result<Instance> {
    let t = Terrain::new(um.lower_chain.clone()).map_err(|e| Error::InvalidPolygon(e.to_string()))?;
    Instance::touching(t, um.h.clone()).map_err(|e| Error::InvalidPolygon(e.to_string()))
}

/// Tries every side as the base; the first one whose opposite chain becomes an
/// x-monotone terrain below it wins.
pub fn from_monotone_mountain(p: &Polygon) -> Result<Adapted> {
    let ring = p.ring();
    let n = ring.len();
    let mut last_err = None;
    for i in 0..n {
        let (a, b) = p.side(i);
        let mut m = MountainTransform {
            origin: a.clone(),
            dx: &b.x - &a.x,
            dy: &b.y - &a.y,
            reflect: false,
        };
        let mapped: Vec<Point> = ring.iter().map(|q| m.forward(q)).collect();
        let above = mapped.iter().any(|q| q.y.is_positive());
        let below = mapped.iter().any(|q| q.y.is_negative());
        if above && below {
            continue;
        }
        m.reflect = above;
        let mapped: Vec<Point> = ring.iter().map(|q| m.forward(q)).collect();
        let framed_poly = Polygon::new(mapped)?;
        let um = match UniMonotonePolygon::new(framed_poly) {
            Ok(um) if um.h_side == i => um,
            Ok(_) => continue,
            Err(e) => {
                last_err = Some(e);
                continue;
            }
        };
        match to_instance(&um) {
            Ok(instance) => {
                return Ok(Adapted { polygon: p.clone(), instance, back: BackMap::Affine(m), framed: um })
            }
            Err(e) => last_err = Some(e),
        }
    }
    Err(last_err.unwrap_or_else(|| Error::InvalidPolygon("no side works as a mountain base".into())))
}

/// Uni-monotone first, then any side as a mountain base.
pub fn adapt_polygon(p: &Polygon) -> Result<Adapted> {
    from_uni_monotone(p).or_else(|_| from_monotone_mountain(p))
}

/// True iff `g` lies in the closed polygon (terrain frame).
pub fn contains(a: &Adapted, g: &Point) -> bool {
    let inst = &a.instance;
    if !inst.altitude.contains_x(&g.x) || g.y > inst.altitude.y {
        return false;
    }
    match inst.terrain.height_at(&g.x) {
        Some(h) => g.y >= h,
        None => false,
    }
}

/// Vertical projection of an interior point onto `H` (terrain frame).
pub fn project_guard_to_h(a: &Adapted, g: &Point) -> Result<Point> {
    if !contains(a, g) {
        return Err(Error::OutsidePolygon(g.to_string()));
    }
    Ok(a.instance.altitude.point(&g.x))
}

/// Re-certifies a solution in the polygon's own coordinates.
///
/// Positions along the base are measured as `lambda = <q - a, d> / |d|^2` and
/// depth as `cross(d, q - a)`, so nothing from the forward transform is reused
/// except where the base ends sit.
pub fn certify_in_polygon(a: &Adapted, solution: &Solution) -> Result<PolygonCertificate> {
    let ring = a.polygon.ring();
    let alt = &a.instance.altitude;
    // base ends taken in the terrain's left-to-right order
    let base_a = &a.back.point(&alt.point(&alt.x_min));
    let base_b = &a.back.point(&alt.point(&alt.x_max));
    let d = Point { x: &base_b.x - &base_a.x, y: &base_b.y - &base_a.y };
    let d2 = &(&d.x * &d.x) + &(&d.y * &d.y);
    let zero = Point::new(0, 0);
    let lambda = |q: &Point| -> Coord {
        let v = &(&(&q.x - &base_a.x) * &d.x) + &(&(&q.y - &base_a.y) * &d.y);
        &v / &d2
    };
    let raw_depth = |q: &Point| -> Coord {
        let rel = Point { x: &q.x - &base_a.x, y: &q.y - &base_a.y };
        cross(&zero, &d, &rel)
    };
    // orient depth so the chain lies at depth <= 0
    let flip = ring.iter().any(|q| raw_depth(q).is_positive());
    let frame = |q: &Point| -> Point {
        let h = raw_depth(q);
        Point { x: lambda(q), y: if flip { -h } else { h } }
    };
    let base_pts = Polygon::new(ring.iter().map(&frame).collect())?;
    let um = UniMonotonePolygon::new(base_pts)?;
    let inst = to_instance(&um)?;

    let guards_poly: Vec<Point> = a.guard_points(solution);
    let mut on_base = true;
    for g in &guards_poly {
        let c = cross(base_a, base_b, g);
        let l = lambda(g);
        on_base &= c.is_zero() && !l.is_negative() && l <= Coord::one();
    }
    // affine maps keep edge parameters, so witnesses carry over once the vertex
    // lists are known to correspond
    let same_chain = inst.terrain.vertices().len() == a.instance.terrain.vertices().len()
        && a.instance.terrain.vertices().iter().zip(inst.terrain.vertices()).all(|(v, w)| frame(&a.back.point(v)) == *w);
    if !same_chain {
        return Err(Error::Invariant {
            message: "polygon frame and terrain frame disagree on the lower chain".into(),
            trace: String::new(),
        });
    }
    let witness_points: Vec<Point> = solution
        .witnesses
        .iter()
        .map(|w| a.back.point(&w.realize(&a.instance, &Coord::zero())))
        .collect();
    let guards: Vec<Coord> = guards_poly.iter().map(&lambda).collect();
    let certificate = certify_parts(&guards, &solution.witnesses, &inst);
    Ok(PolygonCertificate { guards_on_base: on_base, guard_points: guards_poly, witness_points, certificate })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolygonCertificate {
    pub guards_on_base: bool,
    pub guard_points: Vec<Point>,
    pub witness_points: Vec<Point>,
    pub certificate: Certificate,
}

impl PolygonCertificate {
    pub fn valid(&self) -> bool {
        self.guards_on_base && self.certificate.valid()
    }
}
