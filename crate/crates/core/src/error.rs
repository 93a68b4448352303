use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error at row {row}, column {col}: unexpected {found:?}")]
    Parse { row: usize, col: usize, found: char },

    #[error("dimension error: row {row} has {found} entries, expected {expected}")]
    Ragged {
        row: usize,
        expected: usize,
        found: usize,
    },

    #[error("empty matrix")]
    EmptyMatrix,

    #[error("malformed json matrix: {0}")]
    Json(String),

    #[error("size error: {0}")]
    Size(String),

    #[error("validation error: {0}")]
    Validation(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("index error: {0}")]
    Index(String),

    #[error("shape error: {0}")]
    Shape(String),

    #[error("unsupported minor order {order}: at most {max} is supported")]
    UnsupportedOrder { order: usize, max: usize },

    #[error("budget error: {required} evaluations exceed the cap of {cap}; {hint}")]
    Budget {
        required: u128,
        cap: u64,
        hint: &'static str,
    },

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Process exit status used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Budget { .. } => 3,
            _ => 2,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
