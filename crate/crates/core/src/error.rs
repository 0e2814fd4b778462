use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("cannot parse {input:?} at position {position}: {message}")]
    Parse {
        input: String,
        position: usize,
        message: String,
    },
    #[error("alphabet mismatch: {0} vs {1}")]
    AlphabetMismatch(String, String),
    #[error("digit {digit} is outside alphabet {alphabet}")]
    DigitOutOfRange { digit: i32, alphabet: String },
    #[error("period word must be nonempty")]
    EmptyPeriod,
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("argument outside its domain: {0}")]
    Domain(String),
    #[error("sequence is not an infinite expansion of 1: {0}")]
    NotAnExpansionOfOne(String),
    #[error("translation code is not the unique code of its value")]
    NotUnique,
    #[error("tolerance not reached after {iterations} iterations")]
    Tolerance { iterations: usize },
    #[error("block index {0} exceeds the materialization cap")]
    BlockCap(u32),
}
