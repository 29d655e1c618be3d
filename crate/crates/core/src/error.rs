use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("arithmetic overflow: {0}")]
    Overflow(String),

    #[error("parameter out of domain: {0}")]
    Domain(String),

    #[error("no cascade representation: {0}")]
    NoRepresentation(String),

    #[error("index out of range: {0}")]
    Range(String),

    #[error("uniformity mismatch: {left} vs {right}")]
    UniformityMismatch { left: u32, right: u32 },

    #[error("shadow of a 0-uniform family is undefined")]
    EmptyUniformity,

    #[error("segment length {m} exceeds ambient size {available}")]
    SegmentTooLong { m: u128, available: u128 },

    #[error("search budget of {budget} nodes exceeded")]
    BudgetExceeded { budget: u64 },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
