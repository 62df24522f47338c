use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("weight is not admissible: {0}")]
    Inadmissible(String),

    #[error("tabulated weight has no sample at level {level} (stored levels 0..={stored})")]
    TabulatedRange { level: u32, stored: u32 },

    #[error("tabulated weight can only be evaluated at t = 2^-j, got t = {0}")]
    TabulatedPoint(f64),

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(u32, u32),

    #[error("unsupported embedding: {0}")]
    Unsupported(String),

    #[error("dominance condition fails: {0}")]
    Dominance(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error("memory guard: {cells} cells exceed the limit of {limit}")]
    MemoryGuard { cells: f64, limit: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
