//! Experiment runner: TOML configs in, iteration-count tables out.

mod config;
mod experiment;
mod report;
pub mod tables;

pub use config::{validate_config, CellCheck, ExperimentConfig, Sweep, Validation};
pub use experiment::{run_cell, run_experiment, CellResult, Outcome, TableRow};
pub use report::{emit_csv, format_float, header, write_csv};
