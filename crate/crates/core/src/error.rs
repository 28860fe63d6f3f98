use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid search space: {0}")]
    InvalidSpace(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("{0} has a fixed dimension of 2")]
    FixedDimension(&'static str),
    #[error("individual {0} has no fitness")]
    Unevaluated(usize),
    #[error("invalid sample: {0}")]
    InvalidSample(String),
}
