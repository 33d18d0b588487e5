use std::path::PathBuf;

use thiserror::Error;

use crate::geom::Band;

/// Errors raised by the segmentation library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    UnreadableFile {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed image header: {0}")]
    MalformedHeader(String),

    #[error("unsupported image format: {0}")]
    UnsupportedFormat(String),

    #[error("invalid image dimensions {width}x{height} with {len} pixels")]
    InvalidDimensions { width: usize, height: usize, len: usize },

    #[error("band {band} out of bounds for axis of length {limit}")]
    BandOutOfBounds { band: Band, limit: usize },

    #[error("line image contains no ink")]
    EmptyLine,

    #[error("word image contains no ink")]
    EmptyWord,

    #[error("synthetic layout does not fit: {0}")]
    SpecDoesNotFit(String),

    #[error("dimension mismatch: expected {expected:?}, found {found:?}")]
    DimensionMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
