use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{cross, ray_hit_altitude, ray_hit_edge, Coord, Instance, Point, Ray, SubEdge, Terrain};
use crate::visibility::{edge_right_limit, interval_of_point, left_bound, right_bound};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Mark {
    pub edge: usize,
    pub t: Coord,
    pub stored_vertex: usize,
}

/// Marks grouped per edge, each list sorted by `t`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Marks {
    pub per_edge: Vec<Vec<Mark>>,
}

impl Marks {
    pub fn total(&self) -> usize {
        self.per_edge.iter().map(Vec::len).sum()
    }

    pub fn on_edge(&self, j: usize) -> &[Mark] {
        &self.per_edge[j]
    }

    pub fn iter(&self) -> impl Iterator<Item = &Mark> {
        self.per_edge.iter().flatten()
    }

    fn from_unsorted(n_edges: usize, marks: Vec<Mark>) -> Marks {
        let mut per_edge = vec![Vec::new(); n_edges];
        for m in marks {
            per_edge[m.edge].push(m);
        }
        for list in &mut per_edge {
            list.sort_by(|a, b| a.t.cmp(&b.t).then(a.stored_vertex.cmp(&b.stored_vertex)));
            list.dedup();
        }
        Marks { per_edge }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeEvents {
    /// Soft opening: leftmost abscissa seeing the right end.
    pub s: Coord,
    /// Opening: leftmost abscissa seeing the whole edge.
    pub o: Coord,
    /// Closing: rightmost abscissa seeing the whole edge.
    pub c: Coord,
}

/// Parameter where edge `j` meets the line through `a` and `b`.
fn edge_line_param(t: &Terrain, j: usize, a: &Point, b: &Point) -> Coord {
    let (p, q) = t.edge(j);
    let f0 = cross(a, b, p);
    let f1 = cross(a, b, q);
    if f0 == f1 {
        return Coord::one();
    }
    &f0 / &(&f0 - &f1)
}

/// Every visible vertex pair `u < w` shoots a ray from `w` through `u`; its first
/// terrain hit beyond `u` is a mark storing `w`.
pub fn marks_naive(t: &Terrain) -> Marks {
    let n = t.len();
    let v = t.vertices();
    let mut out = Vec::new();
    for w in 1..n {
        // scan u leftwards keeping the highest sightline from w
        let mut best: Option<usize> = None;
        for u in (0..w).rev() {
            let visible = match best {
                None => true,
                Some(b) => !cross(&v[w], &v[b], &v[u]).is_positive(),
            };
            if !visible {
                continue;
            }
            best = Some(u);
            if u == 0 {
                continue;
            }
            if let Some(m) = first_hit_left(t, w, u) {
                out.push(m);
            }
        }
    }
    Marks::from_unsorted(t.num_edges(), out)
}

fn first_hit_left(t: &Terrain, w: usize, u: usize) -> Option<Mark> {
    let v = t.vertices();
    // beyond u the ray immediately runs under or along e_{u-1}
    if !cross(&v[w], &v[u], &v[u - 1]).is_positive() {
        return Some(Mark { edge: u - 1, t: Coord::one(), stored_vertex: w });
    }
    let ray = Ray::new(v[w].clone(), v[u].clone()).expect("distinct vertices");
    for j in (0..u).rev() {
        if let Some(hit) = ray_hit_edge(&ray, &v[j], &v[j + 1]) {
            if hit == v[u] {
                continue;
            }
            let tj = edge_line_param(t, j, &v[w], &v[u]);
            return Some(Mark { edge: j, t: tj, stored_vertex: w });
        }
    }
    None
}

/// Right-to-left sweep over the upper hull of the suffix; at most `n - 1` marks.
pub fn marks_convex_hull(t: &Terrain) -> Marks {
    let n = t.len();
    let v = t.vertices();
    let mut per_edge = vec![Vec::new(); t.num_edges()];
    let mut hull: Vec<usize> = vec![n - 1];
    for j in (0..n - 1).rev() {
        let mut popped = Vec::new();
        while hull.len() >= 2 {
            let h1 = hull[hull.len() - 1];
            let h2 = hull[hull.len() - 2];
            if cross(&v[h2], &v[h1], &v[j]).is_positive() {
                break;
            }
            let tj = edge_line_param(t, j, &v[h2], &v[h1]);
            popped.push(Mark { edge: j, t: tj, stored_vertex: h2 });
            hull.pop();
        }
        popped.reverse();
        per_edge[j] = popped;
        hull.push(j);
    }
    Marks { per_edge }
}

/// Events per edge from endpoints plus marks as candidate points.
pub fn edge_events(inst: &Instance, marks: &Marks) -> Vec<EdgeEvents> {
    let t = &inst.terrain;
    let vi: Vec<_> = t.vertices().iter().map(|p| interval_of_point(inst, p)).collect();
    (0..t.num_edges())
        .map(|j| {
            let mut o = vi[j].l.clone().max(vi[j + 1].l.clone());
            let mut c = vi[j].r.clone().min(vi[j + 1].r.clone());
            for m in marks.on_edge(j) {
                let iv = interval_of_point(inst, &t.point_at(j, &m.t));
                o = o.max(iv.l);
                c = c.min(iv.r);
            }
            EdgeEvents { s: vi[j + 1].l.clone(), o, c }
        })
        .collect()
}

/// Closing of a sub-edge via a single ray from its right end.
///
/// Falls back to [`closing_reference`] when no usable pivot exists.
pub fn closing_of_interval(sub: &SubEdge, marks: &Marks, inst: &Instance) -> Result<Coord> {
    check_nonempty(sub)?;
    if sub.whole || sub.t_end == Coord::one() {
        return closing_reference(sub, marks, inst);
    }
    let t = &inst.terrain;
    let j = sub.edge;
    let q = t.point_at(j, &sub.t_end);
    let list = marks.on_edge(j);
    let k = list.partition_point(|m| m.t < sub.t_end);
    let pivot = match list.get(k) {
        Some(m) => t.vertex(m.stored_vertex),
        None => t.vertex(j + 1),
    };
    if pivot.y > q.y && pivot.x > q.x {
        let ray = Ray::new(q, pivot.clone())?;
        if let Some(hit) = ray_hit_altitude(&ray, &inst.altitude.y) {
            return Ok(inst.altitude.clamp(hit.x));
        }
    }
    closing_reference(sub, marks, inst)
}

/// Minimum right bound over the sub-edge's left end, the marks inside it and its right end.
pub fn closing_reference(sub: &SubEdge, marks: &Marks, inst: &Instance) -> Result<Coord> {
    check_nonempty(sub)?;
    let t = &inst.terrain;
    let j = sub.edge;
    let mut c = right_bound(inst, t.vertex(j));
    for m in marks.on_edge(j) {
        if m.t < sub.t_end {
            c = c.min(right_bound(inst, &t.point_at(j, &m.t)));
        }
    }
    let end = if sub.whole {
        right_bound(inst, t.vertex(j + 1))
    } else if sub.t_end == Coord::one() {
        edge_right_limit(inst, j)
    } else {
        right_bound(inst, &t.point_at(j, &sub.t_end))
    };
    Ok(c.min(end))
}

/// Events of a sub-edge computed from scratch.
pub fn subedge_events(sub: &SubEdge, marks: &Marks, inst: &Instance) -> Result<EdgeEvents> {
    check_nonempty(sub)?;
    let t = &inst.terrain;
    let j = sub.edge;
    let (a, b) = t.edge(j);
    let o = left_bound(inst, a).max(left_bound(inst, b));
    let s = if sub.whole { left_bound(inst, b) } else { left_bound(inst, &t.point_at(j, &sub.t_end)) };
    let c = closing_reference(sub, marks, inst)?;
    Ok(EdgeEvents { s, o, c })
}

fn check_nonempty(sub: &SubEdge) -> Result<()> {
    if !sub.t_end.is_positive() {
        return Err(Error::EmptySubEdge(sub.edge));
    }
    Ok(())
}

/// Mirror image `x -> -x` of a terrain, vertices reversed.
pub fn mirror_terrain(t: &Terrain) -> Terrain {
    let vs = t.vertices().iter().rev().map(|p| Point { x: -&p.x, y: p.y.clone() }).collect();
    Terrain::new(vs).expect("mirror of a valid terrain")
}

/// Marks of the mirrored sweep, mapped back; `stored_vertex` is the left generator.
pub fn marks_left_sweep(t: &Terrain, naive: bool) -> Marks {
    let mt = mirror_terrain(t);
    let m = if naive { marks_naive(&mt) } else { marks_convex_hull(&mt) };
    let n = t.len();
    let ne = t.num_edges();
    let back = m
        .iter()
        .map(|mk| Mark {
            edge: ne - 1 - mk.edge,
            t: &Coord::one() - &mk.t,
            stored_vertex: n - 1 - mk.stored_vertex,
        })
        .collect();
    Marks::from_unsorted(ne, back)
}
