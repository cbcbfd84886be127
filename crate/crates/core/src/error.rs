use thiserror::Error;

/// Errors raised by space construction, series arithmetic and operator algebra.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum HardyError {
    #[error("weight at index {index} is not strictly positive ({value})")]
    NonPositiveWeight { index: usize, value: f64 },

    #[error("scale factor must be nonzero")]
    ZeroScale,

    #[error("degree {degree} exceeds the weight sequence's n_max = {n_max}")]
    DegreeExceedsWeights { degree: usize, n_max: usize },

    #[error("insufficient headroom: need degree {required}, only {available} available")]
    InsufficientHeadroom { required: usize, available: usize },

    #[error("space mismatch: {0}")]
    SpaceMismatch(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, HardyError>;
