use thiserror::Error;

/// Errors raised across the analysis layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("quadrature did not converge: achieved error {achieved:.3e}, requested {requested:.3e}")]
    Quadrature { achieved: f64, requested: f64 },

    #[error("extension undefined in direction {direction:?}: exponential moment diverges")]
    ExtensionUndefined { direction: Vec<f64> },

    #[error("invalid Levy triplet: {0}")]
    InvalidTriplet(String),

    #[error("invalid jump measure: {0}")]
    InvalidMeasure(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("argument {re}{im:+}i lies on the branch cut of the principal square root")]
    BranchCut { re: f64, im: f64 },

    #[error("direction is not a unit vector (norm {norm})")]
    NonUnitDirection { norm: f64 },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("infinite-activity family requires a positive truncation epsilon")]
    TruncationRequired,

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("search grid is empty")]
    EmptyGrid,

    #[error("test function support violates the required margin {margin} inside box half-length {half_length}")]
    SupportMargin { margin: f64, half_length: f64 },

    #[error("zero set is not a lattice; periodicity group not computed")]
    NonLattice,
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, got })
    }
}
