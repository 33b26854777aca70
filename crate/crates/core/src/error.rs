use thiserror::Error;

/// Errors raised by the coding, channel and decoding layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum SmcError {
    #[error("dimension error: {0}")]
    Dimension(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("rank {rank} out of range for C({n}, {k}) = {count}")]
    RankOutOfRange {
        rank: u128,
        n: usize,
        k: usize,
        count: u128,
    },
    #[error("validation error: {0}")]
    Validation(String),
    #[error("degenerate channel: block {0} has zero energy under h")]
    DegenerateChannel(usize),
    #[error("exhaustive search refused: {candidates} candidates exceed the guard of {guard}")]
    TooManyCandidates { candidates: u128, guard: u128 },
    #[error("config error:\n  {}", .0.join("\n  "))]
    Config(Vec<String>),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, SmcError>;

impl From<std::io::Error> for SmcError {
    fn from(e: std::io::Error) -> Self {
        SmcError::Io(e.to_string())
    }
}
