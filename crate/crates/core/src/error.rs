use thiserror::Error;

/// Failure modes shared by every numerical routine in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("configuration error: {0}")]
    Configuration(String),
    #[error("unsupported regime: {0}")]
    UnsupportedRegime(String),
    #[error("causality violation: {0}")]
    Causality(String),
    #[error("below threshold: {0}")]
    BelowThreshold(String),
    #[error("insufficient resolution: {0}")]
    Resolution(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("estimation error: {0}")]
    Estimation(String),
    #[error("no convergence: {message} (partial value {partial:e}, error estimate {error:e})")]
    Convergence {
        message: String,
        partial: f64,
        error: f64,
    },
}

impl Error {
    /// True for failures caused by the numerics rather than by the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Convergence { .. } | Error::Resolution(_) | Error::Estimation(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
