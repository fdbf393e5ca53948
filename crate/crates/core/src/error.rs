use std::path::PathBuf;

/// Errors produced by the truth-discovery pipeline.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error("invalid hyperparameter: {0}")]
    InvalidPrior(String),

    #[error("invalid sampler config: {0}")]
    InvalidConfig(String),

    #[error("{kind} index {index} out of range (len {len})")]
    OutOfRange {
        kind: &'static str,
        index: usize,
        len: usize,
    },

    #[error("malformed claim database: {0}")]
    Malformed(String),

    #[error("enumeration over {facts} facts refused (limit {limit})")]
    TooLarge { facts: usize, limit: usize },

    #[error(
        "fact sets differ; only in predictions: [{only_left}]; only in labels: [{only_right}]"
    )]
    MismatchedFacts {
        only_left: String,
        only_right: String,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
