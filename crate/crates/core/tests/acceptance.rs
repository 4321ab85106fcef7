//! Acceptance run: one line per criterion, non-zero exit if any fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::*;
use terrain_guard::adapters::{certify_in_polygon, from_monotone_mountain, from_uni_monotone, project_guard_to_h, BackMap, Polygon};
use terrain_guard::geom::fixtures::{t0, t1, tv};
use terrain_guard::io::{bench, Profile};
use terrain_guard::oracle::{piercing_escalating, verify_coverage};
use terrain_guard::preprocess::{edge_events, marks_convex_hull, marks_naive};
use terrain_guard::visibility::{sees, visibility_interval};
use terrain_guard::{certify, solve, Coord, Instance, Point};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn c(n: i64, d: i64) -> Coord {
    Coord::ratio(n, d)
}

fn fixtures() -> Outcome {
    let mut bad = Vec::new();
    for (name, inst, want) in [("T0", t0(), vec![c(8, 1)]), ("TV", tv(), vec![c(4, 1)]), ("T1", t1(), vec![c(5, 2), c(8, 1)])] {
        let s = solve(&inst).expect("fixture solves");
        if s.guards != want {
            bad.push(format!("{name} guards {:?}", s.guards.iter().map(ToString::to_string).collect::<Vec<_>>()));
        }
        if !certify(&s, &inst).valid() {
            bad.push(format!("{name} certificate invalid"));
        }
    }
    let inst = t1();
    let s = solve(&inst).expect("T1 solves");
    let ws: Vec<Point> = certify(&s, &inst).witness_points;
    if ws != vec![Point::new(0, 0), Point::new(8, 0)] {
        bad.push(format!("T1 witnesses {ws:?}"));
    }
    outcome(bad.is_empty(), if bad.is_empty() { "T0, TV, T1 exact".into() } else { bad.join("; ") })
}

fn certificates(insts: &[Instance]) -> Outcome {
    let mut failures = Vec::new();
    for (i, inst) in insts.iter().enumerate() {
        let s = solve(inst).expect("instance solves");
        let cert = certify(&s, inst);
        let covered = verify_coverage(&s.guard_points(inst), inst);
        if !(covered && cert.counts_match && cert.pairwise_disjoint && cert.coverage_ok) {
            failures.push(i);
        }
    }
    outcome(failures.is_empty(), format!("{}/{} certified, failing {:?}", insts.len() - failures.len(), insts.len(), failures))
}

fn lower_bounds(insts: &[Instance]) -> Outcome {
    let mut failures = Vec::new();
    let mut deepest = 0;
    for (i, inst) in insts.iter().enumerate() {
        let g = solve(inst).expect("instance solves").guards.len();
        let (lb, level) = piercing_escalating(inst, g, 40);
        deepest = deepest.max(level);
        if lb != g {
            failures.push((i, lb, g));
        }
    }
    outcome(
        failures.is_empty(),
        format!("{}/{} equal, deepest refinement {deepest}, failing {:?}", insts.len() - failures.len(), insts.len(), failures),
    )
}

fn differential(insts: &[Instance]) -> Outcome {
    let mut mismatched = 0;
    let mut too_many = 0;
    for inst in insts {
        let hull = marks_convex_hull(&inst.terrain);
        let naive = marks_naive(&inst.terrain);
        if edge_events(inst, &hull) != edge_events(inst, &naive) {
            mismatched += 1;
        }
        if hull.total() > inst.terrain.len() {
            too_many += 1;
        }
    }
    outcome(
        mismatched == 0 && too_many == 0,
        format!("{} instances, {mismatched} event mismatches, {too_many} over the mark bound", insts.len()),
    )
}

fn visibility_properties() -> Outcome {
    let mut r = rng(5);
    let insts = sample_instances(1000, 3, 60, 55);
    let (mut no_help, mut interval) = (0usize, 0usize);
    for k in 0..100_000 {
        let inst = &insts[k % insts.len()];
        let t = &inst.terrain;
        let p = terrain_point(inst, &mut r);
        let mut xs = [altitude_x(inst, &mut r), altitude_x(inst, &mut r), altitude_x(inst, &mut r)];
        xs.sort();
        let [a1, a2, a3] = xs.map(|x| inst.altitude.point(&x));
        // a guard blind to a point on its right gets no help from further left, and symmetrically
        if a2.x < p.x && !sees(&a2, &p, t) && sees(&a1, &p, t) {
            no_help += 1;
        }
        if a2.x > p.x && !sees(&a2, &p, t) && sees(&a3, &p, t) {
            no_help += 1;
        }
        let iv = visibility_interval(&p, inst).expect("point on terrain");
        let consistent = [&a1, &a2, &a3].iter().all(|a| sees(a, &p, t) == iv.contains(&a.x));
        let convex = !(sees(&a1, &p, t) && sees(&a3, &p, t)) || sees(&a2, &p, t);
        if !consistent || !convex {
            interval += 1;
        }
    }
    let (mut projection, mut interior) = (0usize, 0usize);
    for (k, inst) in sample_instances(200, 3, 80, 505).iter().enumerate() {
        let ring = uni_monotone_ring(inst, k % 2 == 1);
        let a = from_uni_monotone(&Polygon::new(ring).expect("ring")).expect("uni-monotone");
        let t = &a.instance.terrain;
        let guards = solve(&a.instance).expect("solves").guard_points(&a.instance);
        for _ in 0..1000 {
            let g = interior_point(&a.instance, &mut r);
            let p = terrain_point(&a.instance, &mut r);
            let up = project_guard_to_h(&a, &g).expect("interior point");
            if sees(&g, &p, t) && !sees(&up, &p, t) {
                projection += 1;
            }
            if !guards.iter().any(|h| sees(h, &g, t)) {
                interior += 1;
            }
        }
    }
    let total = no_help + interval + projection + interior;
    outcome(
        total == 0,
        format!(
            "violations: no-help {no_help}/1e5, interval {interval}/1e5, projection {projection}/2e5, interior coverage {interior}/2e5"
        ),
    )
}

fn mountains() -> Outcome {
    let mut r = rng(6);
    let mut failures = Vec::new();
    for (k, inst) in sample_instances(100, 3, 80, 606).iter().enumerate() {
        let p = random_mountain(inst, &mut r);
        let ok = (|| {
            let a = from_monotone_mountain(&p).ok()?;
            let BackMap::Affine(m) = &a.back else { return None };
            let round_trip = p.ring().iter().all(|v| &m.inverse(&m.forward(v)) == v);
            let s = solve(&a.instance).ok()?;
            let cert = certify_in_polygon(&a, &s).ok()?;
            Some(round_trip && cert.valid())
        })();
        if ok != Some(true) {
            failures.push(k);
        }
    }
    outcome(failures.is_empty(), format!("{}/100 round-trip and certify, failing {failures:?}", 100 - failures.len()))
}

fn scaling() -> Outcome {
    let sizes = [1000, 2000, 4000];
    // best of three per size to damp scheduler noise
    let mut best = vec![f64::INFINITY; sizes.len()];
    for _ in 0..3 {
        match bench(&sizes, 1, Profile::RandomWalk) {
            Ok(rows) => {
                for (b, row) in best.iter_mut().zip(&rows) {
                    *b = b.min(row.seconds);
                }
            }
            Err(e) => return outcome(false, format!("bench failed: {e}")),
        }
    }
    let ratios: Vec<f64> = best.windows(2).map(|w| w[1] / w[0]).collect();
    let pass = ratios.iter().all(|&q| q <= 5.0) && best[2] <= 30.0;
    outcome(
        pass,
        format!(
            "times {:.3}s/{:.3}s/{:.3}s, doubling ratios {:.2}/{:.2} (limit 5), n=4000 budget 30s",
            best[0], best[1], best[2], ratios[0], ratios[1]
        ),
    )
}

fn run(label: &str, budget: Option<Duration>, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let o = f();
    let took = start.elapsed();
    let in_time = budget.is_none_or(|b| took <= b);
    let pass = o.pass && in_time;
    let budget_note = budget.map_or(String::new(), |b| format!(", budget {}s", b.as_secs()));
    println!(
        "{} {label}: {} [{:.2}s{budget_note}]",
        if pass { "PASS" } else { "FAIL" },
        o.detail,
        took.as_secs_f64()
    );
    pass
}

fn main() -> ExitCode {
    let random = sample_instances(1000, 3, 200, 2024);
    let differential_set = sample_instances(500, 3, 200, 4048);
    let results = [
        run("criterion 1 (fixtures)", Some(Duration::from_secs(1)), fixtures),
        run("criterion 2 (optimality certificate)", Some(Duration::from_secs(60)), || certificates(&random)),
        run("criterion 3 (piercing lower bound)", Some(Duration::from_secs(120)), || lower_bounds(&random)),
        run("criterion 4 (differential preprocessing)", None, || differential(&differential_set)),
        run("criterion 5 (visibility properties)", None, visibility_properties),
        run("criterion 6 (mountain adapter)", None, mountains),
        run("criterion 7 (scaling)", None, scaling),
    ];
    let passed = results.iter().filter(|&&p| p).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if passed == results.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
