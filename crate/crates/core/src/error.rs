use thiserror::Error;

/// Errors raised by the simulation, estimation and spectrum routines.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    /// A configuration value violates its documented constraint.
    #[error("invalid configuration: {0}")]
    Config(String),
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// The caller combined inputs that do not belong together.
    #[error("usage error: {0}")]
    Usage(String),
    /// The flow could not be advanced past a near-singular configuration.
    #[error("flow became singular at t = {time}: {reason}")]
    Singularity { time: f64, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    /// True for failures of the numerical integration itself.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::Singularity { .. })
    }
}
