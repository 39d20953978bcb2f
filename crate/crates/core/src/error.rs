use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LcafError {
    /// A window `[pos, pos + ell - 1]` (1-based) that does not fit in the string.
    #[error("window at position {pos} of length {ell} does not fit in a string of length {len}")]
    OutOfRange { pos: usize, ell: usize, len: usize },

    #[error("row is empty")]
    EmptyRow,

    #[error("rows have different window lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),

    #[error("symbol {0:?} is not in the alphabet")]
    UnknownSymbol(char),

    #[error("binary algorithm needs at most 2 distinct symbols, input has {0}")]
    NotBinary(usize),

    #[error("no window of length {ell} has exactly {ones} ones")]
    NotFound { ell: usize, ones: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("input error: {0}")]
    Input(String),

    #[error("cannot read {path}: {message}")]
    Io { path: PathBuf, message: String },
}

pub type Result<T> = std::result::Result<T, LcafError>;
