use std::path::{Path, PathBuf};

use thiserror::Error;

pub type Result<T, E = CliError> = std::result::Result<T, E>;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const USAGE: i32 = 1;
    pub const DATA: i32 = 2;
    pub const MISMATCH: i32 = 3;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration: {0}")]
    Config(String),

    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },

    #[error("{}: {message}", path.display())]
    Format { path: PathBuf, message: String },

    #[error("{}: {source}", path.display())]
    Data { path: PathBuf, source: fakenews_core::Error },

    #[error(transparent)]
    Core(#[from] fakenews_core::Error),

    #[error("model mismatch: {0}")]
    Mismatch(String),

    #[error("stage `{stage}` failed: {source}")]
    Stage { stage: &'static str, source: Box<CliError> },
}

impl CliError {
    pub fn io(path: impl AsRef<Path>, source: std::io::Error) -> Self {
        CliError::Io { path: path.as_ref().to_path_buf(), source }
    }

    pub fn format(path: impl AsRef<Path>, message: impl Into<String>) -> Self {
        CliError::Format { path: path.as_ref().to_path_buf(), message: message.into() }
    }

    pub fn data(path: impl AsRef<Path>, source: fakenews_core::Error) -> Self {
        CliError::Data { path: path.as_ref().to_path_buf(), source }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => exit::USAGE,
            CliError::Mismatch(_) => exit::MISMATCH,
            CliError::Core(fakenews_core::Error::SchemaMismatch { .. }) => exit::MISMATCH,
            CliError::Data { source: fakenews_core::Error::SchemaMismatch { .. }, .. } => exit::MISMATCH,
            CliError::Stage { source, .. } => source.exit_code(),
            CliError::Io { .. } | CliError::Format { .. } | CliError::Data { .. } | CliError::Core(_) => exit::DATA,
        }
    }
}

/// Tags errors with the pipeline stage that produced them.
pub trait StageExt<T> {
    fn stage(self, stage: &'static str) -> Result<T>;
}

impl<T, E: Into<CliError>> StageExt<T> for std::result::Result<T, E> {
    fn stage(self, stage: &'static str) -> Result<T> {
        self.map_err(|e| CliError::Stage { stage, source: Box::new(e.into()) })
    }
}
