//! Text formats and commands for the `qcat` binary.
//!
//! Exit statuses: 0 when the command succeeds or the tested property holds,
//! 1 when the property fails (a witness is printed), 2 on input errors.

pub mod commands;
pub mod format;

pub use commands::{execute, run, Cli, CliError, Command, Outcome};
pub use format::{parse, Document, FormatError, Kind};
