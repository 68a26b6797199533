//! File formats, configuration and batch commands around `fakenews-core`.

pub mod config;
pub mod error;
pub mod formats;
pub mod parallel;
pub mod pipeline;

pub use config::PipelineConfig;
pub use error::{CliError, Result};
