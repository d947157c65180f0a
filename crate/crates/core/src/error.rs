use thiserror::Error;

/// Errors raised by the simulation core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (largest asymmetry {0:e})")]
    NotHermitian(f64),
    #[error("Jacobi iteration did not converge within {0} sweeps")]
    NoConvergence(usize),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("non-finite entry in input")]
    NonFinite,
    #[error("invalid chain parameters: {0}")]
    InvalidSpec(String),
    #[error("exceptional point |gamma| = 1: eigenvectors coalesce and the spectral decomposition is singular")]
    EpSingular,
    #[error("PT symmetry is broken at |gamma| = {0} > 1; only phase classification is available")]
    BrokenPhase(f64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("size {size} exceeds the supported maximum {max}")]
    TooLarge { size: usize, max: usize },
    #[error("projected block (2S = {two_s}, copy {copy}) deviates from the chain matrix by {deviation:e}")]
    BlockMismatch { two_s: usize, copy: usize, deviation: f64 },
    #[error("malformed state file: {0}")]
    Parse(String),
    #[error("i/o failure: {0}")]
    Io(String),
}

impl Error {
    /// Failures of the numerics, as opposed to rejected input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::EpSingular
                | Error::BrokenPhase(_)
                | Error::NoConvergence(_)
                | Error::NotHermitian(_)
                | Error::BlockMismatch { .. }
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
