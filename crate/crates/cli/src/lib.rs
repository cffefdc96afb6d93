//! Batch experiment runner: one `key = value` config file per experiment.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod runner;

pub use config::{ConfigError, ExperimentConfig, ExperimentKind};
pub use runner::{run_config, run_file, RunError, RunOutcome};
