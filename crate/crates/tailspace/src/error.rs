use thiserror::Error;

/// Errors shared by every layer of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension {n} exceeds dense capacity {max}")]
    Capacity { n: u32, max: u32 },
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(u32, u32),
    #[error("value table has length {len}, expected 2^{n}")]
    BadLength { n: u32, len: usize },
    #[error("entries must be finite")]
    NonFinite,
    #[error("exponent must satisfy p >= 1")]
    InvalidExponent,
    #[error("spectral set must contain at least one level")]
    EmptyLevels,
    #[error("level {level} out of range for n = {n}")]
    LevelOutOfRange { level: u32, n: u32 },
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
