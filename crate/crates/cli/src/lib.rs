//! `charwalk` experiment runner: parses the command line, runs one
//! subcommand on a worker pool, and writes `<command>.csv` (and `.json`).

pub mod cache;
pub mod commands;
pub mod config;
mod error;
pub mod render;

use std::path::PathBuf;

pub use config::{Cli, Command, ExperimentConfig, Format};
pub use error::{CliError, Result};

/// Runs `command` and writes its table into `cfg.out_dir`. A run stopped by a
/// resource limit still writes what it finished before returning the error.
pub fn run(command: Command, cfg: &ExperimentConfig) -> Result<Vec<PathBuf>> {
    let outcome = commands::execute(command, cfg)?;
    let written = outcome
        .table
        .write(&cfg.out_dir, cfg.output_format == Format::Json)?;
    match outcome.failure {
        Some(e) => Err(e),
        None => Ok(written),
    }
}
