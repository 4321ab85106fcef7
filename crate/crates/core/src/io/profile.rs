use serde::Serialize;

use crate::error::{Error, Result};
use crate::geom::{Coord, Instance, Terrain};
use crate::sweep::solve;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProfileRow {
    pub height: Coord,
    pub guards: usize,
}

/// Optimum guard count at each height. Heights must be increasing and above the terrain.
pub fn profile_altitudes(t: &Terrain, heights: &[Coord]) -> Result<Vec<ProfileRow>> {
    if heights.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("heights must be strictly increasing".into()));
    }
    heights
        .iter()
        .map(|h| {
            let inst = Instance::new(t.clone(), h.clone())?;
            Ok(ProfileRow { height: h.clone(), guards: solve(&inst)?.guards.len() })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::fixtures::{t0, t1, tv};

    fn hs(v: &[i64]) -> Vec<Coord> {
        v.iter().map(|&h| Coord::from_int(h)).collect()
    }

    #[test]
    fn fixture_profiles() {
        let rows = profile_altitudes(&t1().terrain, &hs(&[5, 100])).unwrap();
        assert_eq!(rows.iter().map(|r| r.guards).collect::<Vec<_>>(), vec![2, 1]);
        let rows = profile_altitudes(&t0().terrain, &hs(&[1, 2, 50])).unwrap();
        assert!(rows.iter().all(|r| r.guards == 1));
        assert_eq!(profile_altitudes(&tv().terrain, &hs(&[3])).unwrap()[0].guards, 1);
    }

    #[test]
    fn rejects_low_or_unsorted_heights() {
        assert!(matches!(profile_altitudes(&t1().terrain, &hs(&[4])), Err(Error::InvalidAltitude(_))));
        assert!(matches!(profile_altitudes(&t1().terrain, &hs(&[7, 6])), Err(Error::InvalidArgument(_))));
    }
}
