//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Coarse classification used by the CLI to pick an exit code:
/// input problems exit with 1, numerical failures with 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Input,
    Numerical,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("csv row {row} has {found} columns, expected {expected}")]
    RaggedRow {
        row: usize,
        expected: usize,
        found: usize,
    },

    #[error("cell at row {row}, column '{column}' is not numeric: '{value}'")]
    BadNumericCell {
        row: usize,
        column: String,
        value: String,
    },

    #[error("cell at row {row}, column '{column}' is not binary: '{value}'")]
    BadBinaryCell {
        row: usize,
        column: String,
        value: String,
    },

    #[error("unknown attribute '{0}'")]
    UnknownAttribute(String),

    #[error("attribute '{0}' has no observed values; drop it before imputing")]
    FullyMissingAttribute(String),

    #[error("invalid schema line {line}: '{text}'")]
    BadSchemaLine { line: usize, text: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("label derivation left no samples")]
    EmptyLabelSubset,

    #[error("dataset has missing values; impute first")]
    MissingValues,

    #[error("fold count {k} exceeds sample count {n}")]
    TooManyFolds { k: usize, n: usize },

    #[error("split is degenerate: train={train}, test={test}")]
    DegenerateSplit { train: usize, test: usize },

    #[error("training set has a single class")]
    SingleClass,

    #[error("operation requires a binary classification task, got {0} classes")]
    NotBinary(usize),

    #[error("feature vector has length {found}, model expects {expected}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("training diverged: loss is not finite at epoch {epoch}")]
    Diverged { epoch: u32 },

    #[error("linear system is singular or ill-conditioned (pivot {pivot:e})")]
    SingularSystem { pivot: f64 },

    #[error("{0}")]
    Invalid(String),
}

impl Error {
    /// Exit-code class for this error.
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Diverged { .. } | Error::SingularSystem { .. } => ErrorClass::Numerical,
            _ => ErrorClass::Input,
        }
    }
}

impl Error {
    pub fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
