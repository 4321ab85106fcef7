use std::time::Instant;

use serde::Serialize;

use super::generate::{generate_instance, Profile};
use crate::error::Result;
use crate::sweep::solve;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub n: usize,
    pub seconds: f64,
    pub guards: usize,
    /// Time relative to the previous row.
    pub ratio: Option<f64>,
}

/// Times one solve per size on a generated instance.
pub fn bench(sizes: &[usize], seed: u64, profile: Profile) -> Result<Vec<BenchRow>> {
    let mut rows: Vec<BenchRow> = Vec::with_capacity(sizes.len());
    for &n in sizes {
        let inst = generate_instance(n, seed, profile, 1)?;
        let start = Instant::now();
        let sol = solve(&inst)?;
        let seconds = start.elapsed().as_secs_f64();
        let ratio = rows.last().map(|r| seconds / r.seconds.max(1e-9));
        rows.push(BenchRow { n, seconds, guards: sol.guards.len(), ratio });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_bench() {
        let rows = bench(&[20, 40], 1, Profile::RandomWalk).unwrap();
        assert_eq!(rows.len(), 2);
        assert!(rows[0].ratio.is_none() && rows[1].ratio.is_some());
        assert!(rows.iter().all(|r| r.guards >= 1));
    }
}
