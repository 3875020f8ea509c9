use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("unsupported image format: {0}")]
    UnsupportedFormat(String),

    #[error("malformed image {path}: {reason}")]
    MalformedImage { path: PathBuf, reason: String },

    #[error("raster has zero width or height")]
    EmptyRaster,

    #[error("invalid degradation: {0}")]
    InvalidDegrade(String),

    #[error("invalid grid size {g} for a {width}x{height} raster")]
    InvalidGrid { g: u32, width: u32, height: u32 },

    #[error("malformed polygon: {0}")]
    Tracing(String),

    #[error("{path}:{line}: {reason}")]
    Parse { path: PathBuf, line: usize, reason: String },

    #[error("invalid image id {0:?}; ids must match [A-Za-z0-9_.-]+")]
    InvalidId(String),

    #[error("polygon kinds differ; only primary-primary or hole-hole pairs are comparable")]
    KindMismatch,

    #[error("invalid match weights: {0}")]
    InvalidWeights(String),

    #[error("corpus is empty")]
    EmptyCorpus,

    #[error("{0}")]
    Eval(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for failures that come from the filesystem rather than from the
    /// content of a file.
    pub fn is_io(&self) -> bool {
        matches!(self, Error::Io { .. })
    }
}
