use thiserror::Error;

/// Errors raised anywhere in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("modulus is reducible over F_{0}")]
    ReducibleModulus(u32),
    #[error("modulus degree {got:?} does not match extension degree {expected}")]
    DegreeMismatch { expected: u32, got: Option<usize> },
    #[error("field of size {0} is too large")]
    FieldTooLarge(u64),
    #[error("division by zero")]
    DivideByZero,
    #[error("operands live in different fields")]
    FieldMismatch,
    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),
    #[error("continued fraction does not converge: partial quotient of degree 0")]
    NonConvergent,
    #[error("basis is singular")]
    SingularBasis,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("witness does not satisfy |p + q.x| <= Pi_+(q)^(-1-eps)")]
    WitnessTooWeak,
    #[error("repeated point in difference quotient")]
    RepeatedPoint,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    pub(crate) fn precision(msg: impl Into<String>) -> Self {
        Error::InsufficientPrecision(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
