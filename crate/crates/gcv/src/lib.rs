//! Command-line front end for `gcv-core`: argument parsing, orchestration
//! and deterministic JSON or text reports.

pub mod cli;
pub mod report;
pub mod run;

pub use run::{render, render_error, run, RunError};
