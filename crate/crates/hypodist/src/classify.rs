//! Metric-agnostic k-nearest-neighbor classification.
//!
//! A query is assigned the majority label among its k closest training
//! functions under the chosen metric. Distance ties at the k-th neighbor
//! are broken deterministically by smallest training index; vote ties
//! (possible only for even k) are broken by a fair coin drawn from an
//! explicitly seeded generator, so every result is replayable.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::GridFunction;
use crate::metric::MetricKind;
use crate::stream::{rng_for, Seed};

/// Grid functions paired with binary class labels.
///
/// All functions share one bitwise-identical grid and labels are 0 or 1.
#[derive(Debug, Clone)]
pub struct LabeledSample {
    functions: Vec<GridFunction>,
    labels: Vec<u8>,
}

impl LabeledSample {
    pub fn new(functions: Vec<GridFunction>, labels: Vec<u8>) -> Result<Self> {
        if functions.is_empty() {
            return Err(Error::InvalidArgument("empty sample".into()));
        }
        if functions.len() != labels.len() {
            return Err(Error::InvalidArgument(format!(
                "{} functions but {} labels",
                functions.len(),
                labels.len()
            )));
        }
        for &l in &labels {
            if l > 1 {
                return Err(Error::InvalidArgument(format!(
                    "label {l} is not binary (expected 0 or 1)"
                )));
            }
        }
        for f in &functions[1..] {
            if !functions[0].same_grid(f) {
                return Err(Error::GridMismatch);
            }
        }
        Ok(LabeledSample { functions, labels })
    }

    pub fn len(&self) -> usize {
        self.functions.len()
    }

    pub fn is_empty(&self) -> bool {
        false // n >= 1 by construction
    }

    pub fn functions(&self) -> &[GridFunction] {
        &self.functions
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }
}

/// Rectangular matrix of pairwise distances.
#[derive(Debug, Clone)]
pub struct DistanceMatrix {
    entries: Vec<f64>, // row major
    rows: usize,
    cols: usize,
    metric: MetricKind,
}

impl DistanceMatrix {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn metric(&self) -> MetricKind {
        self.metric
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }
}

fn ensure_common_grid<'a>(
    mut fns: impl Iterator<Item = &'a GridFunction>,
) -> Result<&'a GridFunction> {
    let first = fns
        .next()
        .ok_or_else(|| Error::InvalidArgument("empty function sequence".into()))?;
    for f in fns {
        if !first.same_grid(f) {
            return Err(Error::GridMismatch);
        }
    }
    Ok(first)
}

/// Distances from every function of `a` to every function of `b`;
/// `entries[i][j] = metric(a_i, b_j)`. Rows are computed in parallel.
pub fn distance_matrix(
    a: &[GridFunction],
    b: &[GridFunction],
    metric: MetricKind,
) -> Result<DistanceMatrix> {
    let fa = ensure_common_grid(a.iter())?;
    let fb = ensure_common_grid(b.iter())?;
    if !fa.same_grid(fb) {
        return Err(Error::GridMismatch);
    }
    let rows: Vec<Vec<f64>> = a
        .par_iter()
        .map(|fi| b.iter().map(|fj| metric.distance(fi, fj)).collect())
        .collect::<Result<_>>()?;
    Ok(DistanceMatrix {
        entries: rows.concat(),
        rows: a.len(),
        cols: b.len(),
        metric,
    })
}

/// Symmetric distance matrix of `fns` against itself: only the upper
/// triangle is evaluated, the diagonal is exactly zero.
pub fn self_distance_matrix(fns: &[GridFunction], metric: MetricKind) -> Result<DistanceMatrix> {
    ensure_common_grid(fns.iter())?;
    let n = fns.len();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
        .collect();
    let upper: Vec<f64> = pairs
        .par_iter()
        .map(|&(i, j)| metric.distance(&fns[i], &fns[j]))
        .collect::<Result<_>>()?;
    let mut entries = vec![0.0; n * n];
    for (&(i, j), &d) in pairs.iter().zip(&upper) {
        entries[i * n + j] = d;
        entries[j * n + i] = d;
    }
    Ok(DistanceMatrix {
        entries,
        rows: n,
        cols: n,
        metric,
    })
}

/// Majority vote among the k nearest of `dists` (excluding `exclude`),
/// with the documented tie rules. `dists[j]` is the distance to training
/// item j carrying `labels[j]`.
fn vote(
    dists: &[f64],
    labels: &[u8],
    exclude: Option<usize>,
    k: usize,
    tie_rng: &mut rand_chacha::ChaCha8Rng,
) -> u8 {
    use rand::Rng;
    let mut order: Vec<usize> = (0..dists.len()).filter(|&j| Some(j) != exclude).collect();
    order.sort_unstable_by(|&a, &b| dists[a].total_cmp(&dists[b]).then(a.cmp(&b)));
    let ones: usize = order[..k].iter().map(|&j| usize::from(labels[j])).sum();
    if 2 * ones > k {
        1
    } else if 2 * ones < k {
        0
    } else {
        u8::from(tie_rng.random_bool(0.5))
    }
}

fn check_k(k: usize, n: usize) -> Result<()> {
    if k < 1 || k > n {
        return Err(Error::InvalidArgument(format!(
            "k = {k} must satisfy 1 <= k <= {n}"
        )));
    }
    Ok(())
}

/// Classify `query` by majority among its k nearest training functions.
pub fn knn_classify(
    train: &LabeledSample,
    query: &GridFunction,
    k: usize,
    metric: MetricKind,
    seed: Seed,
) -> Result<u8> {
    check_k(k, train.len())?;
    if !train.functions()[0].same_grid(query) {
        return Err(Error::GridMismatch);
    }
    let dists: Vec<f64> = train
        .functions()
        .iter()
        .map(|f| metric.distance(query, f))
        .collect::<Result<_>>()?;
    let mut rng = rng_for(seed, &[]);
    Ok(vote(&dists, train.labels(), None, k, &mut rng))
}

/// Leave-one-out cross-validated misclassification rate.
///
/// The full symmetric distance matrix is computed once and shared by all
/// folds. The tie coin for fold i is drawn from the substream `(seed, i)`.
pub fn loocv_error(
    sample: &LabeledSample,
    k: usize,
    metric: MetricKind,
    seed: Seed,
) -> Result<f64> {
    let m = self_distance_matrix(sample.functions(), metric)?;
    loocv_error_from_matrix(&m, sample.labels(), k, seed)
}

/// Leave-one-out error from a precomputed symmetric matrix.
pub fn loocv_error_from_matrix(
    m: &DistanceMatrix,
    labels: &[u8],
    k: usize,
    seed: Seed,
) -> Result<f64> {
    let n = m.rows();
    if m.cols() != n || labels.len() != n {
        return Err(Error::InvalidArgument(
            "leave-one-out needs a square matrix with one label per row".into(),
        ));
    }
    if n < k + 1 {
        return Err(Error::InvalidArgument(format!(
            "sample of size {n} too small for leave-one-out with k = {k}"
        )));
    }
    check_k(k, n - 1)?;
    let wrong: usize = (0..n)
        .map(|i| {
            let mut rng = rng_for(seed, &[i as u64]);
            usize::from(vote(m.row(i), labels, Some(i), k, &mut rng) != labels[i])
        })
        .sum();
    Ok(wrong as f64 / n as f64)
}

/// Misclassification rate of the k-NN rule trained on `train`, measured on
/// `test`.
pub fn test_error(
    train: &LabeledSample,
    test: &LabeledSample,
    k: usize,
    metric: MetricKind,
    seed: Seed,
) -> Result<f64> {
    let m = distance_matrix(test.functions(), train.functions(), metric)?;
    test_error_from_matrix(&m, train.labels(), test.labels(), k, seed)
}

/// Test error from a precomputed test-by-train matrix. The tie coin for
/// query q is drawn from the substream `(seed, q)`, so the result does not
/// depend on evaluation order.
pub fn test_error_from_matrix(
    m: &DistanceMatrix,
    train_labels: &[u8],
    test_labels: &[u8],
    k: usize,
    seed: Seed,
) -> Result<f64> {
    if m.cols() != train_labels.len() || m.rows() != test_labels.len() {
        return Err(Error::InvalidArgument(
            "matrix shape does not match the label vectors".into(),
        ));
    }
    check_k(k, m.cols())?;
    let wrong: usize = (0..m.rows())
        .map(|q| {
            let mut rng = rng_for(seed, &[q as u64]);
            usize::from(vote(m.row(q), train_labels, None, k, &mut rng) != test_labels[q])
        })
        .sum();
    Ok(wrong as f64 / m.rows() as f64)
}
