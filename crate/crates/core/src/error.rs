use std::path::PathBuf;

/// Errors produced by the evaluation toolkit.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("image error on {path}: {source}")]
    Image {
        path: PathBuf,
        #[source]
        source: image::ImageError,
    },

    #[error("invalid image format: {0}")]
    Format(String),

    #[error("mask dimensions differ: {pred_width}x{pred_height} (prediction) vs {gt_width}x{gt_height} (ground truth)")]
    ShapeMismatch {
        pred_width: usize,
        pred_height: usize,
        gt_width: usize,
        gt_height: usize,
    },

    /// A point-set operation received an empty operand where the
    /// definition requires a nonempty set.
    #[error("empty point set: {0}")]
    EmptyPointSet(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Dataset ingestion found nothing usable; the message lists what was
    /// actually seen so the caller can fix the layout.
    #[error("ingestion error: {0}")]
    Ingest(String),

    /// An image/ground-truth pairing could not be resolved by filename stem.
    #[error("pairing error: {0}")]
    Pairing(String),

    /// False-positive blob placement gave up after the retry budget.
    #[error("blob placement failed after {attempts} attempts: {reason}")]
    Placement { attempts: usize, reason: String },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
