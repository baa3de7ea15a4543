//! Library side of the `scarsim` command: configuration parsing and runs.

pub mod config;
pub mod run;

pub use config::{parse_args, parse_config, ParseFailure, RunConfig, UsageError};
pub use run::execute;
