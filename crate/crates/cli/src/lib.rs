//! Batch front-end for the numerical toolkit: JSON experiment configs in,
//! CSV reports out.

pub mod config;
pub mod runner;

pub use config::{Command, ConfigError, ExperimentConfig};
pub use runner::{any_failure, emit_csv, run_experiment, ResultRecord};
