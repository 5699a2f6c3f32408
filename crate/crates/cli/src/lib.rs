//! Command implementations behind the `ferroflow` binary.

pub mod checks;
pub mod commands;
pub mod config;
pub mod error;
pub mod instances;

pub use commands::{cmd_flow, cmd_majorant, cmd_psi4, cmd_verify};
pub use config::RunConfig;
pub use error::CliError;
