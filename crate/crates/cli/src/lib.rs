//! Experiment runner for the transfer-learning laboratory: config files,
//! CSV tables and SVG plots.

pub mod config;
pub mod error;
pub mod plot;
pub mod run;
pub mod table;

pub use config::ExperimentConfig;
pub use error::{CliError, Result};
