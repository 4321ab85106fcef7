use crate::error::{Error, Result};
use crate::geom::{Coord, Instance, Point};
use crate::preprocess::{marks_convex_hull, marks_left_sweep, marks_naive, EdgeEvents};
use crate::visibility::{interval_of_point, left_bound, visible_on_edge, ParamInterval, VisibilityInterval};

/// True iff every edge is covered, as a closed set, by the union of what the guards see.
pub fn verify_coverage(guards: &[Point], inst: &Instance) -> bool {
    let t = &inst.terrain;
    (0..t.num_edges()).all(|j| {
        let (a, b) = t.edge(j);
        let mid = a.x.midpoint(&b.x);
        let mut order: Vec<&Point> = guards.iter().collect();
        order.sort_by_cached_key(|g| (&g.x - &mid).abs());
        let mut seen: Vec<ParamInterval> = Vec::new();
        for g in order {
            if let Some(iv) = visible_on_edge(g, inst, j) {
                seen.push(iv);
                if covers_unit(&mut seen) {
                    return true;
                }
            }
        }
        false
    })
}

fn covers_unit(ivs: &mut [ParamInterval]) -> bool {
    ivs.sort_by(|a, b| a.lo.cmp(&b.lo));
    let mut reach = Coord::zero();
    if ivs.first().is_none_or(|iv| iv.lo.is_positive()) {
        return false;
    }
    for iv in ivs.iter() {
        if iv.lo > reach {
            return false;
        }
        if iv.hi > reach {
            reach = iv.hi.clone();
        }
    }
    reach == Coord::one()
}

/// Candidate points per edge, sorted and deduplicated, as parameters in `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CriticalSet {
    pub per_edge: Vec<Vec<Coord>>,
}

impl CriticalSet {
    pub fn len(&self) -> usize {
        self.per_edge.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Endpoints and the marks of both sweep directions, plus uniform subdivisions
/// of every gap for levels 1 to 3.
pub fn critical_set(inst: &Instance, level: u32) -> CriticalSet {
    let t = &inst.terrain;
    let right = marks_convex_hull(t);
    let left = marks_left_sweep(t, false);
    let steps = 1i64 << level.min(3);
    let per_edge = (0..t.num_edges())
        .map(|j| {
            let mut base = vec![Coord::zero(), Coord::one()];
            base.extend(right.on_edge(j).iter().map(|m| m.t.clone()));
            base.extend(left.on_edge(j).iter().map(|m| m.t.clone()));
            base.sort();
            base.dedup();
            let mut pts = base.clone();
            for w in base.windows(2) {
                let gap = &w[1] - &w[0];
                for k in 1..steps {
                    pts.push(&w[0] + &(&gap * &Coord::ratio(k, steps)));
                }
            }
            pts.sort();
            pts.dedup();
            pts
        })
        .collect();
    CriticalSet { per_edge }
}

/// Minimum number of points stabbing every closed interval (greedy by right end).
pub fn greedy_piercing(intervals: &[VisibilityInterval]) -> usize {
    let mut sorted: Vec<&VisibilityInterval> = intervals.iter().collect();
    sorted.sort_by(|a, b| a.r.cmp(&b.r));
    let mut count = 0;
    let mut last: Option<&Coord> = None;
    for iv in sorted {
        if last.is_none_or(|x| &iv.l > x) {
            count += 1;
            last = Some(&iv.r);
        }
    }
    count
}

/// Exhaustive piercing number over subsets of right endpoints; small families only.
pub fn exhaustive_piercing(intervals: &[VisibilityInterval]) -> usize {
    assert!(intervals.len() <= 16, "exhaustive piercing is exponential");
    let mut cands: Vec<&Coord> = intervals.iter().map(|iv| &iv.r).collect();
    cands.sort();
    cands.dedup();
    let k = cands.len();
    let mut best = k;
    for mask in 0u32..(1 << k) {
        let size = mask.count_ones() as usize;
        if size >= best {
            continue;
        }
        let chosen: Vec<&Coord> = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| cands[i]).collect();
        if intervals.iter().all(|iv| chosen.iter().any(|x| iv.contains(x))) {
            best = size;
        }
    }
    best
}

fn intervals_of(inst: &Instance, cs: &CriticalSet) -> Vec<VisibilityInterval> {
    let t = &inst.terrain;
    cs.per_edge
        .iter()
        .enumerate()
        .flat_map(|(j, ts)| ts.iter().map(move |tt| interval_of_point(inst, &t.point_at(j, tt))))
        .collect()
}

/// Stab points chosen by the greedy, left to right.
fn greedy_stabs(intervals: &[VisibilityInterval]) -> Vec<Coord> {
    let mut sorted: Vec<&VisibilityInterval> = intervals.iter().collect();
    sorted.sort_by(|a, b| a.r.cmp(&b.r));
    let mut stabs: Vec<Coord> = Vec::new();
    for iv in sorted {
        if stabs.last().is_none_or(|x| &iv.l > x) {
            stabs.push(iv.r.clone());
        }
    }
    stabs
}

/// Sampled interval family that can be refined one level at a time.
///
/// Levels up to 3 sample the critical set. Each further level runs the greedy on
/// the current sample and adds points just outside what each stab point sees on
/// every edge, at parameter distance `2^-level`; the next interval the greedy
/// would need lives right at such a boundary.
pub struct Piercing<'a> {
    inst: &'a Instance,
    level: u32,
    samples: CriticalSet,
    intervals: Vec<VisibilityInterval>,
}

impl<'a> Piercing<'a> {
    pub fn new(inst: &'a Instance) -> Piercing<'a> {
        let samples = critical_set(inst, 0);
        let intervals = intervals_of(inst, &samples);
        Piercing { inst, level: 0, samples, intervals }
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn bound(&self) -> usize {
        greedy_piercing(&self.intervals)
    }

    pub fn refine(&mut self) {
        self.level += 1;
        let inst = self.inst;
        let n_edges = inst.terrain.num_edges();
        let mut added = vec![Vec::new(); n_edges];
        if self.level <= 3 {
            for (j, ts) in critical_set(inst, self.level).per_edge.into_iter().enumerate() {
                added[j] = ts;
            }
        } else {
            let step = Coord::ratio(1, 1i64 << self.level.min(62));
            for x in greedy_stabs(&self.intervals) {
                let g = inst.altitude.point(&x);
                for (j, extra) in added.iter_mut().enumerate() {
                    let Some(vis) = visible_on_edge(&g, inst, j) else { continue };
                    for cand in [&vis.lo - &step, &vis.hi + &step] {
                        if !cand.is_negative() && cand <= Coord::one() {
                            extra.push(cand);
                        }
                    }
                }
            }
        }
        for (j, extra) in added.iter_mut().enumerate() {
            extra.sort();
            extra.dedup();
            let have = &mut self.samples.per_edge[j];
            extra.retain(|x| have.binary_search(x).is_err());
            have.extend(extra.iter().cloned());
            have.sort();
        }
        self.intervals.extend(intervals_of(inst, &CriticalSet { per_edge: added }));
    }
}

/// Lower bound on the optimum from the piercing number of sampled visibility intervals.
pub fn piercing_lower_bound(inst: &Instance, refinement: u32) -> usize {
    let mut p = Piercing::new(inst);
    while p.level() < refinement {
        p.refine();
    }
    p.bound()
}

/// Raises the refinement level until the bound reaches `target` or `max_level` is hit.
pub fn piercing_escalating(inst: &Instance, target: usize, max_level: u32) -> (usize, u32) {
    let mut p = Piercing::new(inst);
    loop {
        let b = p.bound();
        if b >= target || p.level() >= max_level {
            return (b, p.level());
        }
        p.refine();
    }
}

/// Events from endpoints and marks of both sweeps, independent of the solver's preprocessing.
///
/// Interior samples must all see at least `[o, c]`; a violation is reported as an error.
pub fn events_reference(inst: &Instance) -> Result<Vec<EdgeEvents>> {
    let t = &inst.terrain;
    let right = marks_naive(t);
    let left = marks_left_sweep(t, true);
    let mut out = Vec::with_capacity(t.num_edges());
    for j in 0..t.num_edges() {
        let mut ts = vec![Coord::zero(), Coord::one()];
        ts.extend(right.on_edge(j).iter().map(|m| m.t.clone()));
        ts.extend(left.on_edge(j).iter().map(|m| m.t.clone()));
        let mut o: Option<Coord> = None;
        let mut c: Option<Coord> = None;
        for tt in &ts {
            let iv = interval_of_point(inst, &t.point_at(j, tt));
            o = Some(o.map_or(iv.l.clone(), |x| x.max(iv.l)));
            c = Some(c.map_or(iv.r.clone(), |x| x.min(iv.r)));
        }
        let (o, c) = (o.expect("candidates"), c.expect("candidates"));
        for k in 1..16 {
            let iv = interval_of_point(inst, &t.point_at(j, &Coord::ratio(k, 16)));
            if iv.l > o || iv.r < c {
                return Err(Error::Invariant {
                    message: format!("edge {j}: sample {k}/16 sees only [{}, {}] inside [{o}, {c}]", iv.l, iv.r),
                    trace: String::new(),
                });
            }
        }
        let s = left_bound(inst, t.vertex(j + 1));
        out.push(EdgeEvents { s, o, c });
    }
    Ok(out)
}
