//! Command-line front end for the `thermosup` simulator.
//!
//! Every subcommand reads the same flat set of keys from flags or a TOML
//! config file and emits either a JSON [`record::ResultRecord`] or a CSV table.

pub mod config;
pub mod error;
pub mod literals;
pub mod record;
pub mod run;

pub use config::{Cli, Command, ExperimentConfig, Params};
pub use error::CliError;
pub use run::{execute, run};
