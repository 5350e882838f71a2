use thiserror::Error;

/// Errors produced by kernel evaluations, quadrature and sweep drivers.
#[derive(Debug, Error)]
pub enum Error {
    /// Input outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A stated precondition of the operation is violated.
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// Quadrature failed to converge or detected a divergent integral.
    #[error("quadrature failure: {0}")]
    Quadrature(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

pub(crate) fn precondition<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Precondition(msg.into()))
}

pub(crate) fn quadrature<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Quadrature(msg.into()))
}
