//! Configuration parsing and experiment runner behind the `quasiperc` binary.

pub mod config;
pub mod run;

pub use config::{ConfigError, ExperimentConfig, Mode};
pub use run::{run, RunError, RunSummary};
