use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid domain: min {min} must be strictly less than max {max}")]
    InvalidDomain { min: f64, max: f64 },

    #[error("bad label specification: {0}")]
    BadLabelSpec(String),

    #[error("non-finite input value {0}")]
    NonFiniteInput(f64),

    #[error("invalid environment: {0}")]
    InvalidEnvironment(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error at row {row}, column {column}: {message}")]
    Parse {
        row: usize,
        column: String,
        message: String,
    },

    #[error("dataset is empty")]
    EmptyDataset,

    #[error("degenerate split: {train} training rows and {test} test rows")]
    DegenerateSplit { train: usize, test: usize },

    #[error("unknown class {0:?}")]
    UnknownClass(String),

    #[error("need at least 2 classes, found {0}")]
    TooFewClasses(usize),

    #[error("dataset has no output partition bound")]
    MissingOutputPartition,

    #[error("arity mismatch: expected {expected} inputs, got {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("schema mismatch: {0}")]
    SchemaMismatch(String),

    #[error("model parse error at byte {offset}: {message}")]
    ModelParse { offset: usize, message: String },

    #[error("invariant violation: {0}")]
    Invariant(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
