//! Front end for `vmf-fading`: configuration, CSV output and the
//! `moments`, `lcr`, `afd`, `pdf`, `simulate`, `figures` and `verify`
//! subcommands.

pub mod commands;
pub mod config;
pub mod error;
pub mod table;
pub mod verify;

pub use config::ExperimentConfig;
pub use error::{CliError, CliResult};
