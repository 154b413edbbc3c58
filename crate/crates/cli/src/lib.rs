//! Command-line front end: argument handling, run configuration and the
//! analysis pipelines behind each subcommand.

pub mod args;
pub mod commands;
pub mod config;
pub mod output;

use std::fmt;

/// Failure of a run, mapped onto the process exit status.
#[derive(Debug)]
pub enum Failure {
    /// Bad flags or configuration (exit 1).
    Usage(String),
    /// Missing or unreadable input (exit 2).
    Input(anyhow::Error),
    /// One or more analyses failed (exit 3).
    Analysis(anyhow::Error),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Input(_) => 2,
            Failure::Analysis(_) => 3,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) => write!(f, "usage error: {m}"),
            Failure::Input(e) => write!(f, "input error: {e:#}"),
            Failure::Analysis(e) => write!(f, "analysis error: {e:#}"),
        }
    }
}

impl std::error::Error for Failure {}
