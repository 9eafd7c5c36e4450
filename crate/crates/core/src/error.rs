use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the supported domain.
    #[error("domain: {0}")]
    Domain(String),

    /// An iteration failed to converge within its budget.
    #[error("convergence: {0}")]
    Convergence(String),

    /// Two independent routes to the same quantity disagree beyond tolerance.
    #[error("consistency: {0}")]
    Consistency(String),

    /// A computed certificate or bound was violated.
    #[error("bound violated: {0}")]
    BoundViolated(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
    pub fn convergence(msg: impl Into<String>) -> Self {
        Error::Convergence(msg.into())
    }
    pub fn consistency(msg: impl Into<String>) -> Self {
        Error::Consistency(msg.into())
    }
    pub fn bound(msg: impl Into<String>) -> Self {
        Error::BoundViolated(msg.into())
    }
}
