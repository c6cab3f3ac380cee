use alloc::string::String;

use crate::interaction::Side;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("matrix entry ({row}, {col}) is not finite")]
    NonFinite { row: usize, col: usize },
    #[error("matrix must have at least one row and one column, got {rows}x{cols}")]
    EmptyMatrix { rows: usize, cols: usize },
    #[error("shape mismatch: expected {expected:?}, found {found:?}")]
    ShapeMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("unknown {side} identifier '{id}'")]
    UnknownId { side: Side, id: String },
    #[error("duplicate {side} identifier '{id}'")]
    DuplicateId { side: Side, id: String },
    #[error("{0}")]
    InvalidInput(String),
    #[error("{0}")]
    InvalidConfig(String),
    #[error("{0}")]
    Numerical(String),
    #[error("metric undefined: {0}")]
    UndefinedMetric(String),
}

/// Coarse error classes surfaced by the command line as exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorCategory {
    Config,
    Input,
    Numerical,
}

impl ErrorCategory {
    pub fn as_str(self) -> &'static str {
        match self {
            ErrorCategory::Config => "config",
            ErrorCategory::Input => "input",
            ErrorCategory::Numerical => "numerical",
        }
    }
}

impl Error {
    pub fn category(&self) -> ErrorCategory {
        match self {
            Error::InvalidConfig(_) => ErrorCategory::Config,
            Error::Numerical(_) => ErrorCategory::Numerical,
            Error::NonFinite { .. }
            | Error::EmptyMatrix { .. }
            | Error::ShapeMismatch { .. }
            | Error::UnknownId { .. }
            | Error::DuplicateId { .. }
            | Error::InvalidInput(_)
            | Error::UndefinedMetric(_) => ErrorCategory::Input,
        }
    }
}
