use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A computation would exceed a configured size or node budget. `completed`
    /// carries how far it got (largest finished `m`, nodes visited, ...).
    #[error("resource limit exceeded: {what} (limit {limit}, completed {completed})")]
    ResourceLimit {
        what: &'static str,
        limit: u64,
        completed: u64,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
