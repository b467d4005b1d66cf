//! Command-line front end: image I/O, the `filter`, `entropy`, `curve`,
//! `sweep` and `fixture` subcommands, and CSV/JSON report output.

pub mod app;
pub mod format;
pub mod io;

pub use app::{run, CliError};
