use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("item {item} out of range 1..={n}")]
    ItemOutOfRange { item: usize, n: usize },

    #[error("row {row} out of range 1..={rows}")]
    RowOutOfRange { row: usize, rows: usize },

    #[error("explicit gap override on row {row}, which has {count} defectives (not strictly between {ell} and {u})")]
    OverrideOnNonGapRow {
        row: usize,
        count: usize,
        ell: usize,
        u: usize,
    },

    #[error("gap row {row} has no explicit value")]
    UnresolvedGapRow { row: usize },

    #[error("cannot flip {count} outcomes of a {rows}-row vector")]
    TooManyFlips { count: usize, rows: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("feasibility cap exceeded: {what} needs {needed} > cap {cap}")]
    CapExceeded { what: String, needed: u128, cap: u128 },

    #[error("no verified matrix found after {attempts} attempts")]
    AttemptsExhausted { attempts: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    /// True for errors caused by combinatorial feasibility guards.
    pub fn is_feasibility(&self) -> bool {
        matches!(self, Error::CapExceeded { .. })
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
