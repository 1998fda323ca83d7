//! File formats and command dispatch for the `multicake` binary.

mod commands;
pub mod error;
pub mod format;

pub use commands::{run, Cli, Command, GenCommand, PolygonCommand};
pub use error::CliError;
