use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the mesh generation pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(String),

    #[error("incompatible domain corners (max gap {max_gap:e} > tolerance {tol:e})")]
    IncompatibleCorners { max_gap: f64, tol: f64 },

    #[error("degenerate cell ({i}, {j}): zero-length edge")]
    DegenerateCell { i: usize, j: usize },

    #[error("domain error in `{op}`: {detail}")]
    Domain { op: &'static str, detail: String },

    #[error("non-finite value in layer {layer}")]
    NonFiniteLayer { layer: usize },

    #[error("non-finite loss at collocation point ({xi}, {eta})")]
    NonFiniteLoss { xi: f64, eta: f64 },

    #[error("training diverged at epoch {epoch}: {detail}")]
    Training { epoch: usize, detail: String },

    #[error("parse error at line {line}: {detail}")]
    Parse { line: usize, detail: String },

    #[error("i/o error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
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

pub type Result<T, E = Error> = std::result::Result<T, E>;
