use thiserror::Error;

/// Errors produced anywhere in the solver stack.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid sparse structure: {0}")]
    InvalidStructure(String),

    #[error("matrix is singular: pivot magnitude {magnitude:e} at column {column} is below {threshold:e}")]
    Singular {
        column: usize,
        magnitude: f64,
        threshold: f64,
    },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid problem: {0}")]
    InvalidProblem(String),

    #[error("wavenumber {k} is resonant with mode ({m}, {l})")]
    Resonance { k: f64, m: usize, l: usize },

    #[error("invalid decomposition: {0}")]
    InvalidDecomposition(String),

    #[error("invalid coarse space: {0}")]
    InvalidCoarseSpace(String),

    #[error("index {index} out of range for {len} entries")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("Arnoldi breakdown at iteration {iteration} with relative residual {residual:e}")]
    Breakdown { iteration: usize, residual: f64 },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Toml(#[from] toml::de::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
