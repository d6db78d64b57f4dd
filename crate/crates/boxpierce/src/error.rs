use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("usage: {0}")]
    Usage(String),
    #[error("size cap exceeded: {0}")]
    CapExceeded(String),
    #[error("invalid operation: {0}")]
    InvalidOp(String),
    #[error("cannot sample from zero total weight")]
    ZeroWeight,
    #[error("sampling failure: {0}")]
    SamplingFailure(String),
    #[error("verification failed: {0} boxes unpierced")]
    Unpierced(usize),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn usage(msg: impl Into<String>) -> Error {
    Error::Usage(msg.into())
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidOp(msg.into())
}
