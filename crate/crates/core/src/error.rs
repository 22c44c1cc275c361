use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid mode space: {0}")]
    InvalidModeSpace(String),
    #[error("mode index {mode} out of range 1..={dim}")]
    ModeOutOfRange { mode: usize, dim: usize },
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("tensors belong to different mode spaces")]
    ModeSpaceMismatch,
    #[error("block mismatch: {0}")]
    BlockMismatch(String),
    #[error("parity violation: {0}")]
    ParityViolation(String),
    #[error("vector is not normalized: (f,f)_0 = {0}")]
    NotNormalized(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
