use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// The factorization broke down; the caller should raise the regularization.
    #[error("linear system is singular; increase the regularization")]
    SingularSystem,

    #[error("matrix is not symmetric (max asymmetry {0:e})")]
    NonSymmetric(f64),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid exponent k = {k}: {reason}")]
    InvalidK { k: f64, reason: &'static str },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("fixed-point iterate became non-finite at refinement step {step}")]
    DivergedFixedPoint { step: usize },

    #[error("non-finite value produced by {0}")]
    NonFinite(&'static str),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error at row {row}, column {column}: {message}")]
    ParseError {
        row: usize,
        column: String,
        message: String,
    },

    #[error("ragged rows: row {row} has {found} fields, expected {expected}")]
    RaggedRows {
        row: usize,
        expected: usize,
        found: usize,
    },

    #[error("label {label} out of range for {classes} classes")]
    OutOfRangeLabel { label: usize, classes: usize },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("cannot split {samples} samples into {folds} folds")]
    FoldTooSmall { samples: usize, folds: usize },

    #[error("too many failed trials: {0}")]
    TooManyFailures(String),
}
