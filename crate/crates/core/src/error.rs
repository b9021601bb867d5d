//! Crate-wide error type.

use std::path::PathBuf;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("mask dimensions must be at least 1x1, got {width}x{height}")]
    InvalidDimensions { width: usize, height: usize },

    #[error("cell buffer holds {actual} entries, expected {expected}")]
    CellCountMismatch { expected: usize, actual: usize },

    #[error("failed to decode mask image: {0}")]
    Decode(#[from] image::ImageError),

    #[error("failed to read mask {path}: {message}")]
    ReadMask { path: PathBuf, message: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("manifest {path}: {message}")]
    Manifest { path: PathBuf, message: String },

    #[error("no mask files found in {path}")]
    EmptySource { path: PathBuf },

    #[error("lesion group needs a non-empty id and at least one mask")]
    EmptyGroup,

    #[error("masks within a group must share dimensions")]
    GroupDimensionMismatch,

    #[error("mask dimensions differ: {a_width}x{a_height} vs {b_width}x{b_height}")]
    DimensionMismatch {
        a_width: usize,
        a_height: usize,
        b_width: usize,
        b_height: usize,
    },

    #[error("cannot compare masks with zero pixels")]
    ZeroPixels,

    #[error("structuring element side must be odd and at least 1, got {side}")]
    InvalidSeSide { side: usize },

    #[error("unknown conditioning `{name}`")]
    UnknownConditioning { name: String },

    #[error("empty sample")]
    EmptySample,

    #[error("histogram needs at least one bin")]
    ZeroBins,

    #[error("no conditionings requested")]
    NoConditionings,

    #[error("no lesion group has two or more annotations")]
    NoEligibleGroups,

    #[error("conditioning `{name}` is not part of this report")]
    MissingConditioning { name: String },

    #[error("report holds no distribution summaries")]
    EmptyReport,

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
