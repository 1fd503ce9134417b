use thiserror::Error;

/// Errors produced by the analysis routines.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("invalid code length {0} (supported: 1..=31)")]
    InvalidLength(usize),

    #[error("coordinate {coord} out of range 1..={n}")]
    InvalidCoordinate { coord: usize, n: usize },

    #[error("value {value:#x} does not fit in {n} bits")]
    WordOutOfRange { value: u64, n: usize },

    #[error("code is empty")]
    EmptyCode,

    #[error("code needs at least {needed} words, has {found}")]
    TooFewWords { needed: usize, found: usize },

    #[error("code is not 1-perfect")]
    NotPerfect,

    #[error("word is not a codeword")]
    NotACodeword,

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("invalid i-component: {0}")]
    NotAnIComponent(String),

    #[error("permutation does not preserve the code")]
    NotASymmetry,

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("inconsistent input: {0}")]
    Inconsistent(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
