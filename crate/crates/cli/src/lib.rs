//! Command-line front end: evaluation, verification suites, structure reports and solution
//! transforms with JSON and CSV output.

pub mod commands;
pub mod report;
pub mod suites;

pub use commands::{run, Cli, Output};
