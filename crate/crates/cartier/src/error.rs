use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CartierError {
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid structure: {0}")]
    InvalidStructure(String),
    #[error("unsupported shape: {0}")]
    Unsupported(String),
    #[error("no stabilization within {0} steps")]
    NoStabilization(usize),
    #[error("test-element search exhausted: {0}")]
    SearchExhausted(String),
    #[error("not equivariant: {0}")]
    NotEquivariant(String),
    #[error("negative twist exponent: {0}")]
    NegativeTwist(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, CartierError>;

impl From<std::io::Error> for CartierError {
    fn from(e: std::io::Error) -> Self {
        CartierError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for CartierError {
    fn from(e: serde_json::Error) -> Self {
        CartierError::Parse(e.to_string())
    }
}
