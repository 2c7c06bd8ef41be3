use thiserror::Error;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error(transparent)]
    Core(#[from] hadgal_core::Error),
    #[error("unknown problem `{name}`; available: {available}")]
    UnknownProblem { name: String, available: String },
    #[error("manufactured solution of `{problem}` fails at x = {x}: residual {residual:e}")]
    Manufactured { problem: String, x: f64, residual: f64 },
    #[error("invalid arguments: {0}")]
    Usage(String),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl BenchError {
    /// Errors caused by the caller's input rather than by the numerics.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            BenchError::UnknownProblem { .. }
                | BenchError::Usage(_)
                | BenchError::Io { .. }
                | BenchError::Core(hadgal_core::Error::Parameter(_))
        )
    }
}

pub type Result<T> = std::result::Result<T, BenchError>;
