#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use terrain_guard::adapters::{MountainTransform, Polygon};
use terrain_guard::io::{generate_instance, Profile};
use terrain_guard::{Coord, Instance, Point};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `count` generated instances cycling through every profile, sizes in `lo..=hi`.
pub fn sample_instances(count: usize, lo: usize, hi: usize, seed: u64) -> Vec<Instance> {
    let mut r = rng(seed);
    (0..count)
        .map(|i| {
            let n = r.gen_range(lo..=hi);
            let margin = r.gen_range(1..=3);
            generate_instance(n, r.gen(), Profile::ALL[i % 4], margin).expect("generator emits valid instances")
        })
        .collect()
}

/// Point on edge `j` at a random parameter with denominator 64.
pub fn terrain_point(inst: &Instance, r: &mut ChaCha8Rng) -> Point {
    let j = r.gen_range(0..inst.terrain.num_edges());
    inst.terrain.point_at(j, &Coord::ratio(r.gen_range(0..=64), 64))
}

pub fn altitude_x(inst: &Instance, r: &mut ChaCha8Rng) -> Coord {
    let a = &inst.altitude;
    &a.x_min + &(&(&a.x_max - &a.x_min) * &Coord::ratio(r.gen_range(0..=256), 256))
}

/// Closed uni-monotone polygon over the terrain with `H` at the altitude. With
/// `shared` the end vertices are lifted onto `H` instead of using vertical sides.
pub fn uni_monotone_ring(inst: &Instance, shared: bool) -> Vec<Point> {
    let a = &inst.altitude;
    let mut chain: Vec<Point> = inst.terrain.vertices().to_vec();
    if shared {
        let last = chain.len() - 1;
        chain[0].y = a.y.clone();
        chain[last].y = a.y.clone();
        chain
    } else {
        let mut ring = vec![a.point(&a.x_min)];
        ring.extend(chain);
        ring.push(a.point(&a.x_max));
        ring
    }
}

/// Random interior point of the region between the terrain and the altitude.
pub fn interior_point(inst: &Instance, r: &mut ChaCha8Rng) -> Point {
    let x = altitude_x(inst, r);
    let floor = inst.terrain.height_at(&x).expect("x on terrain");
    let y = &floor + &(&(&inst.altitude.y - &floor) * &Coord::ratio(r.gen_range(0..=256), 256));
    Point { x, y }
}

/// The uni-monotone polygon of `inst` moved by a random invertible map.
pub fn random_mountain(inst: &Instance, r: &mut ChaCha8Rng) -> Polygon {
    let (dx, dy) = loop {
        let d = (r.gen_range(-5i64..=5), r.gen_range(-5i64..=5));
        if d != (0, 0) {
            break d;
        }
    };
    let m = MountainTransform {
        origin: Point::new(r.gen_range(-9i64..=9), r.gen_range(-9i64..=9)),
        dx: Coord::from_int(dx),
        dy: Coord::from_int(dy),
        reflect: r.gen(),
    };
    let mut ring: Vec<Point> = uni_monotone_ring(inst, false).iter().map(|p| m.inverse(p)).collect();
    if r.gen() {
        ring.reverse();
    }
    let k = r.gen_range(0..ring.len());
    ring.rotate_left(k);
    Polygon::new(ring).expect("valid ring")
}
