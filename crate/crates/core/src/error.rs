use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("parse error at row {row}, column {column}: {message}")]
    Parse {
        row: usize,
        column: String,
        message: String,
    },

    #[error("{0}")]
    Schema(String),

    #[error("missing prescribed acreage for years {0:?}")]
    MissingPrescribed(Vec<i32>),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("undefined statistic: {0}")]
    Undefined(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),
}

pub type Result<T> = std::result::Result<T, Error>;
