//! Command-line harness for `hardy-lab`: verification suites, instance
//! generation and decomposition of user-supplied subspaces.
//!
//! Exit codes: 0 when every certificate passes, 1 when at least one fails,
//! 2 on usage, parse or I/O errors.

pub mod app;
pub mod commands;
pub mod config;
pub mod error;
pub mod report;
pub mod suites;

pub use error::CliError;
