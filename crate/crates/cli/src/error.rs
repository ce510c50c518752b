use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum ToolError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: {message}")]
    Parse { path: PathBuf, line: u64, message: String },
    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error(transparent)]
    Core(#[from] fractal_spline_core::Error),
    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),
    #[error("scenario {name}: expected the curve to {expected}, but the margin is {margin:e}")]
    ExpectationFailed { name: String, expected: &'static str, margin: f64 },
    #[error("{0}")]
    Usage(String),
}

pub type Result<T, E = ToolError> = std::result::Result<T, E>;
