use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("position ({row}, {col}) lies outside the stored band")]
    OutsideBand { row: usize, col: usize },

    #[error("index ({row}, {col}) out of range for a {rows}x{cols} matrix")]
    OutOfRange {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },

    #[error("matrix is singular: pivot window of step {step} is exactly zero")]
    SingularStep { step: usize },

    #[error("zero diagonal in triangular factor at index {index}")]
    ZeroDiagonal { index: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("block elimination needs a border of depth 1, got {depth}")]
    BorderDepth { depth: usize },

    #[error("block elimination breaks down: {0}")]
    Breakdown(&'static str),

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
