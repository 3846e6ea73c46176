use std::path::PathBuf;

use thiserror::Error;

/// Errors shared by all modules of the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A point-to-set distance was requested against an empty set.
    #[error("empty point set")]
    EmptyPointSet,

    /// Two functions that must live on bitwise-identical grids do not.
    /// Resample onto a common grid first (see the `preprocess` module).
    #[error("grid mismatch")]
    GridMismatch,

    /// A grid function violates its construction invariants.
    #[error("invalid grid function: {0}")]
    InvalidGrid(String),

    /// A parameter is outside its documented domain.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Domain restriction removed every point of a spectrum.
    #[error("empty restriction")]
    EmptyRestriction,

    /// Normalization was requested for an identically-zero spectrum.
    #[error("cannot normalize zero spectrum")]
    ZeroSpectrum,

    /// The pruned and naive distance kernels disagreed. This is a bug in the
    /// kernels, never in the data.
    #[error("kernel divergence at grid size {size}, pair {pair}")]
    KernelDivergence { size: usize, pair: usize },

    /// A data file failed to parse; reported with file and line.
    #[error("{path}:{line}: {message}", path = path.display())]
    Parse {
        path: PathBuf,
        line: u64,
        message: String,
    },

    /// A pipeline stage failed for one spectrum.
    #[error("spectrum '{id}': {source}")]
    Spectrum {
        id: String,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Annotate an error with the identifier of the spectrum it arose from.
    pub fn for_spectrum(self, id: &str) -> Error {
        Error::Spectrum {
            id: id.to_owned(),
            source: Box::new(self),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
