use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("grid dimension {0} must be a power of two and at least 8")]
    Dimension(usize),

    #[error("dimension mismatch: {left:?} vs {right:?}")]
    Mismatch {
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error(
        "level {level} band reaches frequency {max_freq}, beyond the grid Nyquist limit {nyquist}"
    )]
    LevelTooFine {
        level: u32,
        max_freq: i64,
        nyquist: i64,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("invalid rate parameters: {0}")]
    Domain(String),

    #[error("unknown test function `{0}`")]
    UnknownSignal(String),

    #[error("malformed matrix file: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
