//! Experiment runner behind the `mgep` binary.

pub mod commands;
pub mod config;
pub mod error;

pub use config::{parse_config, ExperimentConfig, Overrides, Source};
pub use error::CliError;
