use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::format::{InstanceFile, Metadata};
use crate::error::{Error, Result};
use crate::geom::{cross, Coord, Instance, Point, Terrain};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Profile {
    Peaks,
    Plateau,
    Sawtooth,
    RandomWalk,
}

impl Profile {
    pub const ALL: [Profile; 4] = [Profile::Peaks, Profile::Plateau, Profile::Sawtooth, Profile::RandomWalk];
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Profile::Peaks => "peaks",
            Profile::Plateau => "plateau",
            Profile::Sawtooth => "sawtooth",
            Profile::RandomWalk => "random-walk",
        })
    }
}

impl FromStr for Profile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Profile> {
        Profile::ALL
            .into_iter()
            .find(|p| p.to_string() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown profile {s:?}")))
    }
}

/// Seeded random terrain with integer coordinates and no three consecutive
/// vertices collinear; the altitude sits `margin` above the highest vertex.
pub fn generate_instance(n: usize, seed: u64, profile: Profile, margin: i64) -> Result<Instance> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("need n >= 2, got {n}")));
    }
    if margin < 1 {
        return Err(Error::InvalidArgument(format!("altitude margin must be positive, got {margin}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut vs: Vec<Point> = Vec::with_capacity(n);
    let (mut x, mut y) = (0i64, 0i64);
    for i in 0..n {
        let (dx, ny) = match profile {
            Profile::Peaks => (rng.gen_range(1..=3), if i % 2 == 0 { rng.gen_range(0..=3) } else { rng.gen_range(6..=14) }),
            Profile::Plateau => {
                let ny = if rng.gen_bool(0.2) { rng.gen_range(0..=8) } else { rng.gen_range(18..=20) };
                (rng.gen_range(1..=4), ny)
            }
            Profile::Sawtooth => {
                // slow climb, sharp drop
                if i % 2 == 0 {
                    (1, rng.gen_range(0..=1))
                } else {
                    (rng.gen_range(3..=4), rng.gen_range(9..=10))
                }
            }
            Profile::RandomWalk => (rng.gen_range(1..=3), y + rng.gen_range(-4..=4)),
        };
        if i > 0 {
            x += dx;
        }
        y = ny;
        let mut p = Point::new(x, y);
        if i >= 2 && cross(&vs[i - 2], &vs[i - 1], &p).is_zero() {
            y += 1;
            p = Point::new(x, y);
        }
        vs.push(p);
    }
    let t = Terrain::new(vs)?;
    debug_assert_eq!(t.len(), n);
    let h = t.max_y() + &Coord::from_int(margin);
    Instance::new(t, h)
}

pub fn generate(n: usize, seed: u64, profile: Profile, margin: i64) -> Result<InstanceFile> {
    let inst = generate_instance(n, seed, profile, margin)?;
    let meta = Metadata { seed: Some(seed), name: Some(format!("{profile}-n{n}-s{seed}")), profile: Some(profile.to_string()) };
    Ok(InstanceFile::from_instance(&inst, meta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sweep::solve;
    use crate::witness::certify;
    use proptest::prelude::*;

    #[test]
    fn small_examples() {
        let f = generate(5, 1, Profile::Peaks, 1).unwrap();
        let inst = f.load().unwrap().instance().clone();
        assert_eq!(inst.terrain.len(), 5);
        for p in Profile::ALL {
            let inst = generate_instance(2, 3, p, 2).unwrap();
            assert_eq!(solve(&inst).unwrap().guards.len(), 1);
        }
        assert!(generate(1, 0, Profile::Peaks, 1).is_err());
        assert!(generate(5, 0, Profile::Peaks, 0).is_err());
        let inst = generate_instance(200, 7, Profile::Sawtooth, 1).unwrap();
        assert!(certify(&solve(&inst).unwrap(), &inst).valid());
    }

    #[test]
    fn profile_names() {
        for p in Profile::ALL {
            assert_eq!(p.to_string().parse::<Profile>().unwrap(), p);
        }
        assert!("hills".parse::<Profile>().is_err());
    }

    proptest! {
        #[test]
        fn deterministic_and_valid(n in 2usize..120, seed in any::<u64>(), k in 0usize..4, margin in 1i64..5) {
            let p = Profile::ALL[k];
            let a = generate(n, seed, p, margin).unwrap();
            prop_assert_eq!(&a, &generate(n, seed, p, margin).unwrap());
            let inst = a.load().unwrap().instance().clone();
            prop_assert_eq!(inst.terrain.len(), n);
            prop_assert_eq!(&inst.altitude.y - inst.terrain.max_y(), Coord::from_int(margin));
        }
    }
}
