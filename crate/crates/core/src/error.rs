use thiserror::Error;

use crate::rational::IntVector;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not square")]
    NotSquare,
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("form is not positive definite")]
    NotPositiveDefinite,
    #[error("singular linear system: vectors are linearly dependent")]
    Singular,
    #[error("lattice point {point:?} lies strictly inside the sphere; center is not a Voronoi vertex")]
    EmptinessViolation { point: IntVector },
    #[error("box radius {radius} too small: a star cell touches the box boundary")]
    BoxTooSmall { radius: i64 },
    #[error("vector {0:?} is not primitive")]
    NotPrimitive(IntVector),
    #[error("zero vector where a nonzero one is required")]
    ZeroVector,
    #[error("integer overflow converting an exact value to i64")]
    Overflow,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("invalid rational literal {0:?}")]
    ParseRational(String),
}
