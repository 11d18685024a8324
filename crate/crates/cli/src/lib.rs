//! Command-line front end: file formats for systems, netlists and reports,
//! and the `synthesize`, `verify`, `transfer` and `decompose-static`
//! commands.
//!
//! Exit codes: 0 success, 1 output not writable, 2 unreadable input or bad
//! arguments, 3 structurally invalid input, 4 synthesis failure or a pole
//! hit, 5 verification failure.

pub mod commands;
pub mod error;
pub mod files;

pub use commands::{run, run_from, Cli};
pub use error::CliError;
