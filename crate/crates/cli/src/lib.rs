//! Command implementations and verification suites behind the `eo-theta` binary.

pub mod commands;
pub mod config;
pub mod report;
pub mod suites;

pub use commands::{Format, Output};
pub use config::Grid;
pub use report::{Report, SuiteResult};
