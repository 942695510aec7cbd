use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Input violates a documented precondition (grade overflow, bad weight, ...).
    #[error("domain error: {0}")]
    Domain(String),
    /// An enumeration or search exceeded its configured budget.
    #[error("resource limit exceeded: {0}")]
    Resource(String),
    /// Arithmetic left the representable range.
    #[error("numeric overflow: {0}")]
    Overflow(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn resource(msg: impl Into<String>) -> Self {
        Error::Resource(msg.into())
    }

    pub fn is_resource(&self) -> bool {
        matches!(self, Error::Resource(_) | Error::Overflow(_))
    }
}
