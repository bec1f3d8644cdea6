use thiserror::Error;

/// Usage, input and engine errors; all exit with status 2.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{file}:{line}: {message}")]
    Parse { file: String, line: usize, message: String },
    #[error("usage: {0}")]
    Usage(String),
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Core(#[from] annmax_core::Error),
}
