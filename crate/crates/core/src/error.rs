use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid shape: {0}")]
    InvalidShape(String),

    #[error("usage error: {0}")]
    Usage(String),

    #[error("point lies on the boundary (distance {distance:e})")]
    OnBoundary { distance: f64 },

    #[error("singular kernel evaluation: target and source coincide")]
    SingularEvaluation,

    #[error("unsupported surface: {0}")]
    UnsupportedSurface(String),

    #[error("invalid subtraction solution: {0}")]
    InvalidSolution(String),

    #[error("linear solve failed: {reason} (condition estimate {condition:e})")]
    Solver { reason: String, condition: f64 },

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }
}
