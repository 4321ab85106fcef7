use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::geom::{cross, ray_hit_altitude, Coord, Instance, Point, Ray, SubEdge, Terrain, TerrainPos};

/// Closed range of altitude-line abscissae that see one terrain point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VisibilityInterval {
    pub l: Coord,
    pub r: Coord,
}

impl VisibilityInterval {
    pub fn contains(&self, x: &Coord) -> bool {
        &self.l <= x && x <= &self.r
    }

    pub fn intersects(&self, other: &VisibilityInterval) -> bool {
        self.l <= other.r && other.l <= self.r
    }
}

/// Parameter interval on one edge; closed unless `hi_open`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamInterval {
    pub lo: Coord,
    pub hi: Coord,
    pub hi_open: bool,
}

impl ParamInterval {
    pub fn contains(&self, t: &Coord) -> bool {
        &self.lo <= t && (t < &self.hi || (!self.hi_open && t == &self.hi))
    }
}

/// True iff the segment `a p` is nowhere strictly below the terrain.
pub fn sees(a: &Point, p: &Point, terrain: &Terrain) -> bool {
    let (left, right) = if a.x <= p.x { (a, p) } else { (p, a) };
    let lo = terrain.first_right_of(&left.x);
    let hi = terrain.first_at_or_right(&right.x);
    if lo >= hi {
        return true;
    }
    terrain.vertices()[lo..hi]
        .iter()
        .all(|u| !cross(left, right, u).is_positive())
}

/// Vertex among `cands` giving the steepest blocking ray from `p`, if any.
fn steepest<'a>(p: &Point, cands: &'a [Point], leftward: bool) -> Option<&'a Point> {
    let mut best: Option<&Point> = None;
    for u in cands {
        if u.y <= p.y {
            continue;
        }
        best = match best {
            None => Some(u),
            Some(b) => {
                let c = cross(p, b, u);
                let above = if leftward { c.is_negative() } else { c.is_positive() };
                Some(if above { u } else { b })
            }
        };
    }
    best
}

fn hit_x(inst: &Instance, p: &Point, u: &Point) -> Coord {
    let ray = Ray::new(p.clone(), u.clone()).expect("distinct points");
    ray_hit_altitude(&ray, &inst.altitude.y)
        .expect("blocker lies between point and altitude")
        .x
}

/// Leftmost seeing abscissa for a point of the terrain (point semantics).
pub fn left_bound(inst: &Instance, p: &Point) -> Coord {
    let t = &inst.terrain;
    let k = t.first_at_or_right(&p.x);
    match steepest(p, &t.vertices()[..k], true) {
        Some(u) => inst.altitude.clamp(hit_x(inst, p, u)),
        None => inst.altitude.x_min.clone(),
    }
}

/// Rightmost seeing abscissa for a point of the terrain (point semantics).
pub fn right_bound(inst: &Instance, p: &Point) -> Coord {
    let t = &inst.terrain;
    let k = t.first_right_of(&p.x);
    match steepest(p, &t.vertices()[k..], false) {
        Some(u) => inst.altitude.clamp(hit_x(inst, p, u)),
        None => inst.altitude.x_max.clone(),
    }
}

pub fn interval_of_point(inst: &Instance, p: &Point) -> VisibilityInterval {
    VisibilityInterval { l: left_bound(inst, p), r: right_bound(inst, p) }
}

pub fn interval_at(inst: &Instance, pos: &TerrainPos) -> VisibilityInterval {
    interval_of_point(inst, &inst.terrain.pos_point(pos))
}

/// Visibility interval of a point that must lie on the terrain.
pub fn visibility_interval(p: &Point, inst: &Instance) -> Result<VisibilityInterval> {
    inst.terrain.locate(p)?;
    Ok(interval_of_point(inst, p))
}

/// Limit of the left bound along edge `j` as `t -> 0+`.
pub fn edge_left_limit(inst: &Instance, j: usize) -> Coord {
    let (a, b) = inst.terrain.edge(j);
    let l = left_bound(inst, a);
    if a.y > b.y {
        l.max(inst.altitude.clamp(hit_x(inst, b, a)))
    } else {
        l
    }
}

/// Limit of the right bound along edge `j` as `t -> 1-`.
pub fn edge_right_limit(inst: &Instance, j: usize) -> Coord {
    let (a, b) = inst.terrain.edge(j);
    let r = right_bound(inst, b);
    if b.y > a.y {
        r.min(inst.altitude.clamp(hit_x(inst, a, b)))
    } else {
        r
    }
}

/// Part of edge `j` seen from `g` on the altitude line, as a closed parameter range.
///
/// Intersects one half-plane constraint per vertex between `g` and the edge.
pub fn visible_on_edge(g: &Point, inst: &Instance, j: usize) -> Option<ParamInterval> {
    let t = &inst.terrain;
    let (a, b) = t.edge(j);
    let mut lo = Coord::zero();
    let mut hi = Coord::one();
    if g.x < a.x {
        // blockers with g.x < x_u <= x_j; u must not lie strictly above g -> p
        let s = t.first_right_of(&g.x);
        for u in &t.vertices()[s..=j] {
            let f0 = cross(g, a, u);
            let f1 = cross(g, b, u);
            if !constrain(&f0, &f1, &mut lo, &mut hi) {
                return None;
            }
        }
    } else if g.x > b.x {
        // blockers with x_{j+1} <= x_u < g.x; u must not lie strictly above p -> g
        let e = t.first_at_or_right(&g.x);
        for u in &t.vertices()[j + 1..e] {
            let f0 = cross(a, g, u);
            let f1 = cross(b, g, u);
            if !constrain(&f0, &f1, &mut lo, &mut hi) {
                return None;
            }
        }
    }
    Some(ParamInterval { lo, hi, hi_open: false })
}

/// Restricts `[lo, hi]` to `{t : (1 - t) f0 + t f1 <= 0}`; false if it becomes empty.
fn constrain(f0: &Coord, f1: &Coord, lo: &mut Coord, hi: &mut Coord) -> bool {
    let p0 = f0.is_positive();
    let p1 = f1.is_positive();
    match (p0, p1) {
        (false, false) => true,
        (true, true) => false,
        _ => {
            let ts = f0 / &(f0 - f1);
            if p0 {
                if &ts > lo {
                    *lo = ts;
                }
            } else if &ts < hi {
                *hi = ts;
            }
            lo <= hi
        }
    }
}

/// Part of a sub-edge seen from `g`; `None` if nothing of it is visible.
pub fn visible_subsegment(g: &Point, inst: &Instance, sub: &SubEdge) -> Option<ParamInterval> {
    let mut iv = visible_on_edge(g, inst, sub.edge)?;
    if !sub.whole && iv.hi >= sub.t_end {
        iv.hi = sub.t_end.clone();
        iv.hi_open = true;
    }
    if iv.lo > iv.hi || (iv.hi_open && iv.lo == iv.hi) {
        return None;
    }
    Some(iv)
}
