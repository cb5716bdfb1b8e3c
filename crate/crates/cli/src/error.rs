use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),

    #[error("resource limit: {0}")]
    Resource(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    /// 2 config, 3 resource, 4 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Resource(_) => 3,
            CliError::Io { .. } => 4,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}

impl From<charwalk_core::Error> for CliError {
    fn from(e: charwalk_core::Error) -> Self {
        match e {
            charwalk_core::Error::InvalidArgument(_) => CliError::Config(e.to_string()),
            charwalk_core::Error::ResourceLimit { .. } => CliError::Resource(e.to_string()),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
