use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid Cartan datum: {0}")]
    InvalidDatum(String),
    #[error("weight window inconsistent: {0}")]
    InconsistentWindow(String),
    #[error("context mismatch: {0}")]
    ContextMismatch(String),
    #[error("unsupported basis: {0}")]
    UnsupportedBasis(String),
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error("weight {0} is not dominant")]
    NotDominant(String),
    #[error("stabilization not reached: {0}")]
    Stabilization(String),
    #[error("not an idempotent: {0}")]
    NotIdempotent(String),
    #[error("dual basis verification failed: {0}")]
    DualBasis(String),
    #[error("invalid module data: {0}")]
    InvalidModule(String),
    #[error("missing operator {0}")]
    MissingOperator(String),
    #[error("cache error: {0}")]
    Cache(String),
}

pub type Result<T> = std::result::Result<T, Error>;
