//! Visual distances for spiky functional data.
//!
//! Functions with sharp, narrow peaks (mass or NMR spectra, for instance)
//! are poorly served by the classical L2 and supremum metrics: a small
//! lateral shift of one peak yields an enormous vertical distance, while an
//! extra narrow peak barely registers in L2. The hypograph-Hausdorff
//! distance of [`metric::hypo_hausdorff`] instead measures how far the two
//! graphs are from each other in any direction, by taking the Hausdorff
//! distance between the regions below the curves.
//!
//! On top of the metric the crate provides:
//!
//! - [`classify`]: a metric-agnostic k-NN classifier with leave-one-out
//!   cross-validation and test-set scoring;
//! - [`simulate`]: a reproducible two-class benchmark (absolute Brownian
//!   bridge plus a randomly located triangular peak) that scores all three
//!   metrics side by side;
//! - [`preprocess`]: spectrum ingestion plus restriction, threshold
//!   denoising, Nadaraya-Watson resampling and normalization;
//! - [`bench`]: a timing harness for the naive and pruned kernels.
//!
//! Everything randomized takes an explicit [`Seed`] and is reproducible
//! across runs and thread counts.

pub mod bench;
pub mod classify;
pub mod error;
pub mod grid;
pub mod metric;
pub mod preprocess;
pub mod simulate;
pub mod stream;

pub use classify::LabeledSample;
pub use error::{Error, Result};
pub use grid::{uniform_grid, GridFunction, Point2D};
pub use metric::MetricKind;
pub use stream::Seed;
