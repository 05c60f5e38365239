use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error: {0}")]
    Parse(String),

    /// A certified quantity missed its bound.
    #[error("certification failed: measured error {measured:e} exceeds bound {bound:e}")]
    CertificationFailure { measured: f64, bound: f64 },

    #[error("no integer degree d satisfies {lower:e} < d^p < {upper:e}")]
    InfeasibleDegree { lower: f64, upper: f64 },

    #[error("zero distance present between points {0} and {1}")]
    ZeroDistance(usize, usize),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("unsupported request: {0}")]
    Unsupported(String),

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
