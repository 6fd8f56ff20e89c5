use thiserror::Error;

/// Errors produced by the field, polynomial, coding and decoding layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("{0} is not a primitive element of F_{1}")]
    NotPrimitive(u32, u32),
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid polynomial: {0}")]
    InvalidPolynomial(&'static str),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("message degree {degree} exceeds bound k = {k}")]
    DegreeTooLarge { degree: usize, k: usize },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("unsupported variant: {0}")]
    UnsupportedVariant(String),
    #[error("infeasible interpolation: {0}")]
    Infeasible(String),
    #[error("parameters rejected: {0}")]
    ParameterRejected(String),
    #[error("candidate list exceeds cap of {0}")]
    CandidateCapExceeded(usize),
    #[error("instance too large for exhaustive search: {0}")]
    InstanceTooLarge(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
