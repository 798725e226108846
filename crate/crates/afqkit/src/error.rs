//! Error types shared across the crate.

use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum RingError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("series offsets differ by a non-lattice amount")]
    IncompatibleOffsets,
    #[error("series window is empty")]
    EmptyWindow,
    #[error("limit diverges")]
    DivergentLimit,
}

#[derive(Error, Debug, Clone, PartialEq)]
pub enum AlgebraError {
    #[error("dimension must be at least 2 (got {0})")]
    DimensionTooSmall(usize),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("Gauss pivot {0} is not invertible")]
    SingularPivot(usize),
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("unsupported parameters: {0}")]
    Unsupported(String),
    #[error("pole of order > 1 at {0}; only simple poles are handled")]
    HigherOrderPole(String),
    #[error(transparent)]
    Ring(#[from] RingError),
}
