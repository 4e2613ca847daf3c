use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),

    #[error("invalid finite function: {0}")]
    InvalidFunction(String),

    #[error("unknown operation `{0}`")]
    UnknownOp(String),

    #[error("variable x{index} exceeds arity {arity}")]
    VariableOutOfRange { index: usize, arity: usize },

    #[error("flavor mismatch: {0}")]
    FlavorMismatch(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parse error at {line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("budget exhausted: {0}")]
    BudgetExhausted(String),

    #[error("invalid data: {0}")]
    InvalidData(String),
}

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}
