use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("zero modulus")]
    ZeroModulus,
    #[error("zero input")]
    ZeroInput,
    #[error("coordinate {0} exceeds the exact-arithmetic cap 2^30")]
    CoordinateRange(i64),
    #[error("modulus norm {norm} exceeds cap {cap}")]
    NormCap { norm: i64, cap: i64 },
    #[error("{0} and {1} are not coprime")]
    NotCoprime(String, String),
    #[error("character belongs to modulus {expected}, got {got}")]
    MismatchedModulus { expected: String, got: String },
    #[error("invalid coefficient spec: {0}")]
    InvalidSpec(String),
    #[error("value out of range: {0}")]
    OutOfRange(String),
    #[error("cutoff {cutoff} leaves a tail bound of {tail:e}")]
    InsufficientCutoff { cutoff: i64, tail: f64 },
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
}

pub type Result<T> = std::result::Result<T, Error>;
