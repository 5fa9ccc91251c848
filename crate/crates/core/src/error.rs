use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument violated an operation's precondition.
    #[error("domain error: {0}")]
    Domain(String),
    /// An iterative routine failed to converge.
    #[error("numeric error: {0}")]
    Numeric(String),
    /// A Monte Carlo estimator saw no events to condition on.
    #[error("insufficient data: {0}")]
    InsufficientData(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
