use thiserror::Error;

/// Errors produced by the library.
///
/// `Domain` is a violated mathematical precondition, `Capability` a size cap
/// that was exceeded, `Config` an invalid configuration value, `Parse` a
/// malformed textual or JSON input.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("capability limit: {0}")]
    Capability(String),
    #[error("config error: {0}")]
    Config(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

pub(crate) fn capability<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Capability(msg.into()))
}
