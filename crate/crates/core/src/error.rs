use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid path: {0}")]
    InvalidPath(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("capital overflow at step {step}")]
    Overflow { step: usize },

    #[error("length mismatch: {0}")]
    LengthMismatch(String),

    #[error("protocol {protocol} cannot be played with {detail}")]
    Incompatible { protocol: String, detail: String },

    #[error("invalid strategy: {0}")]
    InvalidStrategy(String),

    #[error("invalid generator: {0}")]
    InvalidGenerator(String),

    #[error("fractional walk of {n} steps exceeds the exact-sampling limit of {max}")]
    TooLong { n: usize, max: usize },

    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error("line {line}: domain error: {message}")]
    DomainAt { line: u64, message: String },

    #[error("no data rows")]
    NoData,

    #[error("{0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
