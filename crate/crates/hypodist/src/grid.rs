//! Grid-sampled non-negative functions, the data carrier for every metric,
//! classifier and pipeline in this crate.

use crate::error::{Error, Result};

/// A point in the plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point2D {
    pub x: f64,
    pub y: f64,
}

impl Point2D {
    pub fn new(x: f64, y: f64) -> Self {
        Point2D { x, y }
    }
}

/// A non-negative function sampled on a strictly increasing grid.
///
/// Invariants, enforced at construction and never broken afterwards:
/// the grid is strictly increasing with finite entries, the values are
/// finite and non-negative, and both sequences have the same length n >= 1.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    grid: Vec<f64>,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn new(grid: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if grid.len() != values.len() {
            return Err(Error::InvalidGrid(format!(
                "grid has {} points but values has {}",
                grid.len(),
                values.len()
            )));
        }
        if grid.is_empty() {
            return Err(Error::InvalidGrid("no grid points".into()));
        }
        for (i, &t) in grid.iter().enumerate() {
            if !t.is_finite() {
                return Err(Error::InvalidGrid(format!("grid[{i}] = {t} is not finite")));
            }
            if i > 0 && t <= grid[i - 1] {
                return Err(Error::InvalidGrid(format!(
                    "grid not strictly increasing at index {i}: {} then {t}",
                    grid[i - 1]
                )));
            }
        }
        for (i, &v) in values.iter().enumerate() {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidGrid(format!(
                    "value[{i}] = {v} is not finite and non-negative"
                )));
            }
        }
        Ok(GridFunction { grid, values })
    }

    /// The constant function `value` on `grid`.
    pub fn constant(grid: Vec<f64>, value: f64) -> Result<Self> {
        let n = grid.len();
        GridFunction::new(grid, vec![value; n])
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        false // n >= 1 by construction
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Consume the function, returning its parts.
    pub fn into_parts(self) -> (Vec<f64>, Vec<f64>) {
        (self.grid, self.values)
    }

    /// True when `other` lives on a bitwise-identical grid.
    pub fn same_grid(&self, other: &GridFunction) -> bool {
        same_grid(&self.grid, &other.grid)
    }
}

pub(crate) fn same_grid(a: &[f64], b: &[f64]) -> bool {
    a.len() == b.len()
        && a.iter()
            .zip(b.iter())
            .all(|(x, y)| x.to_bits() == y.to_bits())
}

/// `n` equispaced points from `lo` to `hi`, endpoints exact.
pub fn uniform_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(n >= 1, "uniform grid needs at least one point");
    if n == 1 {
        return vec![lo];
    }
    let span = hi - lo;
    let last = n - 1;
    (0..n)
        .map(|i| {
            if i == last {
                hi
            } else {
                lo + span * (i as f64) / (last as f64)
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_mismatched_lengths() {
        assert!(GridFunction::new(vec![0.0, 1.0], vec![0.0]).is_err());
    }

    #[test]
    fn rejects_unsorted_grid() {
        assert!(GridFunction::new(vec![0.0, 0.0], vec![1.0, 1.0]).is_err());
        assert!(GridFunction::new(vec![1.0, 0.0], vec![1.0, 1.0]).is_err());
    }

    #[test]
    fn rejects_negative_and_non_finite_values() {
        assert!(GridFunction::new(vec![0.0, 1.0], vec![0.0, -0.5]).is_err());
        assert!(GridFunction::new(vec![0.0, 1.0], vec![f64::NAN, 0.0]).is_err());
        assert!(GridFunction::new(vec![0.0, f64::INFINITY], vec![0.0, 0.0]).is_err());
    }

    #[test]
    fn single_point_function_is_allowed() {
        let f = GridFunction::new(vec![0.5], vec![2.0]).unwrap();
        assert_eq!(f.len(), 1);
    }

    #[test]
    fn uniform_grid_hits_endpoints_exactly() {
        let g = uniform_grid(0.0, 1.0, 101);
        assert_eq!(g[0], 0.0);
        assert_eq!(g[100], 1.0);
        assert!(g.windows(2).all(|w| w[0] < w[1]));

        let h = uniform_grid(7000.0, 9500.0, 20001);
        assert_eq!(h[0], 7000.0);
        assert_eq!(h[20000], 9500.0);
    }

    #[test]
    fn same_grid_is_bitwise() {
        let f = GridFunction::constant(vec![0.0, 1.0], 1.0).unwrap();
        let g = GridFunction::constant(vec![0.0, 1.0], 2.0).unwrap();
        let h = GridFunction::constant(vec![0.0, 1.0 + 1e-12], 2.0).unwrap();
        assert!(f.same_grid(&g));
        assert!(!f.same_grid(&h));
        assert!(!f.same_grid(&GridFunction::constant(vec![0.0], 1.0).unwrap()));
    }
}
