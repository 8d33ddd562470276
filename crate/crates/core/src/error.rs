use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid colour count: {num_colours} colours for {n} vertices")]
    InvalidColourCount { n: usize, num_colours: usize },

    #[error("cannot plant instance: {0}")]
    PlantInfeasible(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("negative cycle detected")]
    NegativeCycle,

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("search domain is empty")]
    EmptyDomain,

    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    #[error("delta {delta} out of range for n = {n}")]
    InvalidDelta { delta: u64, n: usize },

    #[error("unsupported combination: {0}")]
    UnsupportedCombination(String),

    #[error("invalid sizes: {0}")]
    InvalidSizes(String),

    #[error("evaluator failed at index {index}: {source}")]
    Evaluator {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
