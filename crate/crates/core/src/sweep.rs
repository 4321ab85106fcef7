use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
pub use crate::geom::SubEdge;
use crate::geom::{cross, AltitudeMode, Coord, Instance, Point, Terrain};
use crate::preprocess::{
    closing_of_interval, closing_reference, edge_events, marks_convex_hull, marks_naive, subedge_events,
    EdgeEvents, Marks,
};
use crate::visibility::visible_on_edge;
use crate::witness::{place_witness, EventContext, Witness};

#[derive(Debug, Clone, Default)]
pub struct SolveOptions {
    /// Compare every fast-path construction against its reference.
    pub cross_check: bool,
    /// Use the quadratic mark enumeration instead of the hull sweep.
    pub naive_marks: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "action", rename_all = "snake_case")]
pub enum Action {
    Delete { edge: usize },
    Split { edge: usize, t_end: Coord, closing: Coord },
    /// Split attempted but nothing new was seen.
    Keep { edge: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceEvent {
    pub guard: Coord,
    pub triggers: Vec<SubEdge>,
    pub actions: Vec<Action>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trace {
    pub vertices: Vec<Point>,
    pub altitude: Coord,
    pub mode: AltitudeMode,
    pub initial: Vec<EdgeEvents>,
    pub events: Vec<TraceEvent>,
    pub complete: bool,
}

impl Trace {
    pub fn instance(&self) -> Result<Instance> {
        let t = Terrain::new(self.vertices.clone()).map_err(|e| Error::CorruptTrace(e.to_string()))?;
        if t.len() != self.vertices.len() {
            return Err(Error::CorruptTrace("terrain vertices not canonical".into()));
        }
        Instance::with_mode(t, self.altitude.clone(), self.mode).map_err(|e| Error::CorruptTrace(e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub guards: Vec<Coord>,
    pub witnesses: Vec<Witness>,
    pub trace: Trace,
}

impl Solution {
    pub fn guard_points(&self, inst: &Instance) -> Vec<Point> {
        self.guards.iter().map(|g| inst.altitude.point(g)).collect()
    }
}

#[derive(Debug, Clone)]
struct Alive {
    sub: SubEdge,
    ev: EdgeEvents,
}

pub fn solve(inst: &Instance) -> Result<Solution> {
    solve_with(inst, &SolveOptions::default())
}

pub fn solve_with(inst: &Instance, opts: &SolveOptions) -> Result<Solution> {
    let t = &inst.terrain;
    let marks = if opts.naive_marks { marks_naive(t) } else { marks_convex_hull(t) };
    let initial = edge_events(inst, &marks);
    let mut trace = Trace {
        vertices: t.vertices().to_vec(),
        altitude: inst.altitude.y.clone(),
        mode: inst.mode,
        initial: initial.clone(),
        events: Vec::new(),
        complete: false,
    };
    let mut alive: Vec<Option<Alive>> = initial
        .iter()
        .enumerate()
        .map(|(j, ev)| Some(Alive { sub: SubEdge::whole(j), ev: ev.clone() }))
        .collect();
    let mut order: Vec<usize> = (0..alive.len()).collect();
    let mut queue: BTreeSet<(Coord, usize)> = initial.iter().enumerate().map(|(j, e)| (e.c.clone(), j)).collect();
    let mut guards: Vec<Coord> = Vec::new();
    let mut witnesses = Vec::new();

    while let Some((g, _)) = queue.first().cloned() {
        if guards.last().is_some_and(|last| &g <= last) {
            return Err(invariant("event key does not advance past the last guard", &trace));
        }
        let mut triggers = Vec::new();
        while queue.first().is_some_and(|(c, _)| c == &g) {
            let (_, j) = queue.pop_first().expect("non-empty");
            triggers.push(alive[j].as_ref().expect("queued edge is alive").sub.clone());
        }
        triggers.sort_by_key(|s| s.edge);
        let gp = inst.altitude.point(&g);
        let mut scan = PrefixScan::new(t, &gp);
        let mut actions = Vec::new();
        for &j in &order {
            let a = alive[j].as_mut().expect("ordered edge is alive");
            if a.ev.o <= g && g <= a.ev.c {
                queue.remove(&(a.ev.c.clone(), j));
                actions.push(Action::Delete { edge: j });
            } else if a.ev.o > g && a.ev.s <= g {
                let t_lo = match scan.split_param(j) {
                    Some(v) => v,
                    None => reference_split(inst, &gp, &a.sub)?,
                };
                if opts.cross_check {
                    let r = reference_split(inst, &gp, &a.sub)?;
                    if r != t_lo {
                        return Err(invariant(&format!("split of edge {j}: fast {t_lo} vs reference {r}"), &trace));
                    }
                }
                if !t_lo.is_positive() || t_lo >= a.sub.t_end {
                    actions.push(Action::Keep { edge: j });
                    continue;
                }
                let sub = SubEdge::prefix(j, t_lo)?;
                // the single-ray shortcut relies on hull marks
                let c = if opts.naive_marks {
                    closing_reference(&sub, &marks, inst)?
                } else {
                    closing_of_interval(&sub, &marks, inst)?
                };
                if c <= g {
                    return Err(invariant(&format!("split of edge {j} did not advance its closing"), &trace));
                }
                let ev = EdgeEvents { s: g.clone(), o: a.ev.o.clone(), c: c.clone() };
                if opts.cross_check {
                    let r = subedge_events(&sub, &marks, inst)?;
                    if r != ev {
                        return Err(invariant(&format!("edge {j}: incremental {ev:?} vs scratch {r:?}"), &trace));
                    }
                    if closing_reference(&sub, &marks, inst)? != c {
                        return Err(invariant(&format!("edge {j}: closing shortcut disagrees"), &trace));
                    }
                }
                queue.remove(&(a.ev.c.clone(), j));
                queue.insert((c.clone(), j));
                actions.push(Action::Split { edge: j, t_end: sub.t_end.clone(), closing: c });
                *a = Alive { sub, ev };
            } else if g > a.ev.c {
                return Err(invariant(&format!("edge {j} closes at {} before guard {g}", a.ev.c), &trace));
            }
        }
        for act in &actions {
            if let Action::Delete { edge } = act {
                alive[*edge] = None;
            }
        }
        order.retain(|&j| alive[j].is_some());
        let ctx = EventContext { guard: g.clone(), triggers: triggers.clone() };
        witnesses.push(place_witness(inst, &ctx, guards.last())?);
        guards.push(g.clone());
        trace.events.push(TraceEvent { guard: g, triggers, actions });
    }
    if !order.is_empty() {
        return Err(invariant("queue drained with unguarded edges left", &trace));
    }
    trace.complete = true;
    Ok(Solution { guards, witnesses, trace })
}

fn invariant(message: &str, trace: &Trace) -> Error {
    Error::Invariant {
        message: message.to_string(),
        trace: serde_json::to_string(trace).unwrap_or_default(),
    }
}

/// Lower end of the part of `sub` that `g` sees, by constraint intersection.
fn reference_split(inst: &Instance, g: &Point, sub: &SubEdge) -> Result<Coord> {
    match visible_on_edge(g, inst, sub.edge) {
        Some(iv) if iv.hi >= sub.t_end => Ok(iv.lo),
        _ => Err(Error::Invariant {
            message: format!("guard {g} was expected to see the right end of edge {}", sub.edge),
            trace: String::new(),
        }),
    }
}

/// Highest sightline from a guard towards the right, extended one vertex at a time.
struct PrefixScan<'a> {
    t: &'a Terrain,
    g: &'a Point,
    next: usize,
    best: Option<usize>,
}

impl<'a> PrefixScan<'a> {
    fn new(t: &'a Terrain, g: &'a Point) -> Self {
        PrefixScan { t, g, next: t.first_right_of(&g.x), best: None }
    }

    /// Parameter on edge `j` where the guard's view begins; `None` if `j` is not
    /// strictly right of the guard.
    fn split_param(&mut self, j: usize) -> Option<Coord> {
        let v = self.t.vertices();
        if v[j].x <= self.g.x {
            return None;
        }
        while self.next <= j {
            let u = self.next;
            self.best = match self.best {
                Some(b) if !cross(self.g, &v[b], &v[u]).is_positive() => Some(b),
                _ => Some(u),
            };
            self.next += 1;
        }
        let u = &v[self.best.expect("edge start lies right of the guard")];
        let (a, b) = self.t.edge(j);
        let f0 = cross(self.g, u, a);
        if !f0.is_negative() {
            return Some(Coord::zero());
        }
        let f1 = cross(self.g, u, b);
        if f1.is_negative() {
            return Some(Coord::one());
        }
        Some(&f0 / &(&f0 - &f1))
    }
}

/// Rebuilds the solution from a trace, checking every recorded step.
pub fn replay(trace: &Trace) -> Result<Solution> {
    let inst = trace.instance()?;
    let n_edges = inst.terrain.num_edges();
    if trace.initial.len() != n_edges {
        return Err(Error::CorruptTrace(format!("{} initial events for {n_edges} edges", trace.initial.len())));
    }
    if !trace.complete {
        return Err(Error::CorruptTrace("trace is truncated".into()));
    }
    let mut subs: Vec<Option<(SubEdge, Coord)>> =
        trace.initial.iter().enumerate().map(|(j, e)| Some((SubEdge::whole(j), e.c.clone()))).collect();
    let mut queue: BTreeSet<(Coord, usize)> =
        trace.initial.iter().enumerate().map(|(j, e)| (e.c.clone(), j)).collect();
    let mut guards: Vec<Coord> = Vec::new();
    let mut witnesses = Vec::new();
    for (i, ev) in trace.events.iter().enumerate() {
        let bad = |m: &str| Error::CorruptTrace(format!("event {i}: {m}"));
        let Some((g, _)) = queue.first().cloned() else {
            return Err(bad("no pending edge"));
        };
        if g != ev.guard {
            return Err(bad(&format!("guard {} but next closing is {g}", ev.guard)));
        }
        let mut popped = Vec::new();
        while queue.first().is_some_and(|(c, _)| c == &g) {
            let (_, j) = queue.pop_first().expect("non-empty");
            popped.push(subs[j].as_ref().expect("queued edge is alive").0.clone());
        }
        popped.sort_by_key(|s| s.edge);
        if popped != ev.triggers {
            return Err(bad("triggering edges differ"));
        }
        let mut touched = BTreeSet::new();
        for act in &ev.actions {
            let edge = match act {
                Action::Delete { edge } | Action::Keep { edge } | Action::Split { edge, .. } => *edge,
            };
            if edge >= n_edges || !touched.insert(edge) {
                return Err(bad(&format!("invalid action target {edge}")));
            }
            let Some((sub, c)) = subs[edge].clone() else {
                return Err(bad(&format!("edge {edge} already guarded")));
            };
            let was_trigger = c == g;
            match act {
                Action::Delete { .. } => {
                    if !was_trigger {
                        queue.remove(&(c, edge));
                    }
                    subs[edge] = None;
                }
                Action::Keep { .. } => {
                    if was_trigger {
                        return Err(bad(&format!("triggering edge {edge} kept")));
                    }
                }
                Action::Split { t_end, closing, .. } => {
                    if was_trigger || closing <= &g || !t_end.is_positive() || t_end >= &sub.t_end {
                        return Err(bad(&format!("inconsistent split of edge {edge}")));
                    }
                    queue.remove(&(c, edge));
                    queue.insert((closing.clone(), edge));
                    subs[edge] = Some((SubEdge::prefix(edge, t_end.clone())?, closing.clone()));
                }
            }
        }
        if popped.iter().any(|s| subs[s.edge].is_some()) {
            return Err(bad("a triggering edge was not deleted"));
        }
        let ctx = EventContext { guard: g.clone(), triggers: popped };
        witnesses.push(place_witness(&inst, &ctx, guards.last())?);
        guards.push(g);
    }
    if !queue.is_empty() {
        return Err(Error::CorruptTrace(format!("{} edges left unguarded", queue.len())));
    }
    Ok(Solution { guards, witnesses, trace: trace.clone() })
}

/// Marks used by the default solver path.
pub fn default_marks(inst: &Instance) -> Marks {
    marks_convex_hull(&inst.terrain)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::fixtures::{t0, t1, tv};
    use crate::oracle::verify_coverage;
    use crate::visibility::tests::arb_instance;
    use proptest::prelude::*;

    fn c(n: i64, d: i64) -> Coord {
        Coord::ratio(n, d)
    }

    #[test]
    fn fixtures() {
        assert_eq!(solve(&t0()).unwrap().guards, vec![c(8, 1)]);
        assert_eq!(solve(&tv()).unwrap().guards, vec![c(4, 1)]);
        let s = solve(&t1()).unwrap();
        assert_eq!(s.guards, vec![c(5, 2), c(8, 1)]);
        let first = &s.trace.events[0];
        assert_eq!(first.triggers, vec![SubEdge::whole(0)]);
        assert_eq!(
            first.actions,
            vec![Action::Delete { edge: 0 }, Action::Delete { edge: 1 }, Action::Delete { edge: 2 }]
        );
    }

    #[test]
    fn replay_round_trip() {
        for inst in [t0(), tv(), t1()] {
            let s = solve(&inst).unwrap();
            assert_eq!(replay(&s.trace).unwrap(), s);
        }
    }

    #[test]
    fn replay_rejects_corruption() {
        let s = solve(&t1()).unwrap();
        let mut tr = s.trace.clone();
        tr.events.pop();
        tr.complete = false;
        assert!(matches!(replay(&tr), Err(Error::CorruptTrace(_))));
        let mut tr = s.trace.clone();
        tr.events.pop();
        assert!(matches!(replay(&tr), Err(Error::CorruptTrace(_))));
        let mut tr = s.trace.clone();
        tr.events[0].guard = c(3, 1);
        assert!(matches!(replay(&tr), Err(Error::CorruptTrace(_))));
        let mut tr = s.trace;
        tr.events[0].actions.pop();
        assert!(matches!(replay(&tr), Err(Error::CorruptTrace(_))));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn solutions_are_feasible_and_consistent(inst in arb_instance(25)) {
            let opts = SolveOptions { cross_check: true, naive_marks: false };
            let s = solve_with(&inst, &opts).unwrap();
            prop_assert!(verify_coverage(&s.guard_points(&inst), &inst));
            prop_assert!(s.guards.len() <= inst.terrain.num_edges());
            prop_assert!(s.guards.windows(2).all(|w| w[0] < w[1]));
            let naive = solve_with(&inst, &SolveOptions { cross_check: true, naive_marks: true }).unwrap();
            prop_assert_eq!(&naive.guards, &s.guards);
            prop_assert_eq!(replay(&s.trace).unwrap(), s);
        }

        #[test]
        fn progress_each_event(inst in arb_instance(25)) {
            let s = solve(&inst).unwrap();
            for ev in &s.trace.events {
                prop_assert!(!ev.triggers.is_empty());
                let progressed = ev.actions.iter().any(|a| !matches!(a, Action::Keep { .. }));
                prop_assert!(progressed);
            }
        }
    }
}
