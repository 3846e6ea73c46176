//! Timing harness for the naive and pruned distance kernels.
//!
//! Draws random trajectory-like pairs per grid size, times both kernels on
//! the identical inputs, and verifies their outputs bit for bit. Any
//! divergence is an error, not a statistic.

use std::time::Instant;

use crate::error::{Error, Result};
use crate::grid::{uniform_grid, GridFunction};
use crate::metric::{hypo_hausdorff, hypo_hausdorff_pruned};
use crate::simulate::{draw_trajectory, SimModel};
use crate::stream::{rng_for, splitmix64, Seed};

/// One timing measurement.
#[derive(Debug, Clone)]
pub struct BenchRow {
    pub size: usize,
    pub kernel: &'static str,
    pub seconds: f64,
    /// Order-sensitive hash of the computed distances, hex encoded.
    pub checksum: String,
}

impl BenchRow {
    pub fn csv_header() -> &'static str {
        "size,kernel,seconds,checksum"
    }

    pub fn to_csv_line(&self) -> String {
        format!(
            "{},{},{},{}",
            self.size, self.kernel, self.seconds, self.checksum
        )
    }
}

fn checksum(values: &[f64]) -> String {
    let mut h = 0u64;
    for v in values {
        h = splitmix64(h ^ v.to_bits());
    }
    format!("{h:016x}")
}

/// Random pairs used for timing: simulated trajectories with the peak
/// geometry widened so candidate sets are not trivially empty.
fn bench_pair(size: usize, seed: Seed, pair: usize) -> Result<(GridFunction, GridFunction)> {
    let model = SimModel {
        a1: 0.5,
        a2: 0.5,
        peak_base: 0.1,
        peak_height: 1.0,
        grid_size: size,
    };
    let grid = uniform_grid(0.0, 1.0, size);
    let mut rng = rng_for(seed, &[size as u64, pair as u64]);
    let f = draw_trajectory(0, &model, &grid, &mut rng)?;
    let g = draw_trajectory(1, &model, &grid, &mut rng)?;
    Ok((f, g))
}

/// Time both kernels on `pairs_per_size` random pairs at each grid size.
/// Returns two rows (naive, pruned) per size; errors if any pair of
/// outputs differs in a single bit.
pub fn bench_kernels(sizes: &[usize], pairs_per_size: usize, seed: Seed) -> Result<Vec<BenchRow>> {
    if pairs_per_size == 0 {
        return Err(Error::InvalidArgument("need at least one pair".into()));
    }
    let mut rows = Vec::with_capacity(sizes.len() * 2);
    for &size in sizes {
        let pairs: Vec<(GridFunction, GridFunction)> = (0..pairs_per_size)
            .map(|p| bench_pair(size, seed, p))
            .collect::<Result<_>>()?;

        let t0 = Instant::now();
        let naive: Vec<f64> = pairs
            .iter()
            .map(|(f, g)| hypo_hausdorff(f, g))
            .collect::<Result<_>>()?;
        let naive_secs = t0.elapsed().as_secs_f64();

        let t1 = Instant::now();
        let pruned: Vec<f64> = pairs
            .iter()
            .map(|(f, g)| hypo_hausdorff_pruned(f, g))
            .collect::<Result<_>>()?;
        let pruned_secs = t1.elapsed().as_secs_f64();

        for (pair, (a, b)) in naive.iter().zip(&pruned).enumerate() {
            if a.to_bits() != b.to_bits() {
                return Err(Error::KernelDivergence { size, pair });
            }
        }
        rows.push(BenchRow {
            size,
            kernel: "naive",
            seconds: naive_secs,
            checksum: checksum(&naive),
        });
        rows.push(BenchRow {
            size,
            kernel: "pruned",
            seconds: pruned_secs,
            checksum: checksum(&pruned),
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rows_come_in_pairs_with_matching_checksums() {
        let rows = bench_kernels(&[50, 200], 2, Seed(31)).unwrap();
        assert_eq!(rows.len(), 4);
        for pair in rows.chunks(2) {
            assert_eq!(pair[0].size, pair[1].size);
            assert_eq!(pair[0].kernel, "naive");
            assert_eq!(pair[1].kernel, "pruned");
            assert_eq!(pair[0].checksum, pair[1].checksum);
        }
    }

    #[test]
    fn checksums_depend_on_the_seed() {
        let a = bench_kernels(&[64], 2, Seed(1)).unwrap();
        let b = bench_kernels(&[64], 2, Seed(2)).unwrap();
        assert_ne!(a[0].checksum, b[0].checksum);
        let c = bench_kernels(&[64], 2, Seed(1)).unwrap();
        assert_eq!(a[0].checksum, c[0].checksum);
    }
}
