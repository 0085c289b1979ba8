//! Command-line front end for `raman_core`: configuration parsing and the
//! scan drivers that write CSV and text reports.

mod commands;
mod config;
mod error;

pub use commands::{fmt, run};
pub use config::{parse_config, parse_config_file, parse_range, RunConfig, Subcommand, Units, OUTPUT_DIR_ENV};
pub use error::CliError;
