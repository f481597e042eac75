use thiserror::Error;

/// Errors shared across the library.
///
/// Mathematical falsity (a membership test failing, a certificate of
/// non-orthogonality) is *not* an error; operations return verdict types for
/// that.  `Error` covers malformed inputs and violated preconditions.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("unsupported ring: {0}")]
    UnsupportedRing(String),
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("shape error: {0}")]
    Shape(String),
    #[error("zero input: {0}")]
    ZeroInput(String),
    #[error("not a prime: {0}")]
    NotPrime(String),
    #[error("invalid filtration: {0}")]
    InvalidFiltration(String),
    #[error("window too small: {0}")]
    Window(String),
    #[error("unsupported input: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
