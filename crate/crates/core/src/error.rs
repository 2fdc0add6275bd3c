//! Crate-wide error type.

use std::path::PathBuf;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("failed to read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("label column {0:?} not found in header")]
    MissingLabelColumn(String),

    #[error("row {row}, column {column:?}: cannot parse {value:?} as a finite number")]
    NonNumeric {
        row: usize,
        column: String,
        value: String,
    },

    #[error("dataset contains no samples")]
    EmptyDataset,

    #[error("class {label} has {available} samples but {needed} are required")]
    ClassShortfall {
        label: u8,
        available: usize,
        needed: usize,
    },

    #[error("train fraction {fraction} leaves an empty partition for class {label}")]
    EmptyPartition { fraction: f64, label: u8 },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("covariance rank {achievable} is below the {requested} requested components")]
    RankDeficient {
        requested: usize,
        achievable: usize,
    },

    #[error("problem size {size} exceeds the enumeration bound of {bound} sites")]
    SizeBound { size: usize, bound: usize },

    #[error("labels must contain both classes")]
    SingleClass,

    #[error("distribution sums to {0}, expected 1")]
    NotNormalized(f64),

    #[error("{0}")]
    InvalidArgument(String),
}

impl Error {
    /// Shorthand for [`Error::InvalidArgument`] with a formatted message.
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
