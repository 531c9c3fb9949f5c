//! Batch front end: builds coalgebras, runs cohomology, oracle and ring
//! jobs, and writes JSON/CSV reports.

pub mod config;
pub mod golden;
mod jobs;

use clap::{Parser, Subcommand};
use thiserror::Error;

pub use config::JobOptions;
pub use jobs::run;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("build error: {0}")]
    Build(String),
    #[error("check failed: {0}")]
    Check(String),
    #[error("golden mismatch at {} path(s)", .0.len())]
    Golden(Vec<golden::DiffEntry>),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 2,
            CliError::Build(_) => 3,
            CliError::Check(_) => 4,
            CliError::Golden(_) => 5,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "ppcoh", version, about = "Primitive cohomology of pointed coalgebras")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Build,
    Cohomology,
    Oracle,
    Ring,
    Verify,
    Stabilize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a family (or load a spec), validate it, write the spec JSON.
    Build(JobOptions),
    /// Dimensions of PPⁿ_{g,h} per degree slice.
    Cohomology(JobOptions),
    /// Compare Cotor with Tor over the graded dual algebra.
    Oracle(JobOptions),
    /// Cup-product structure constants and sampled ring identities.
    Ring(JobOptions),
    /// Run a check suite over one family or all of them.
    Verify(JobOptions),
    /// Track cohomology across growing windows of Z.
    Stabilize(JobOptions),
}

impl Command {
    pub fn split(self) -> (CommandKind, JobOptions) {
        match self {
            Command::Build(o) => (CommandKind::Build, o),
            Command::Cohomology(o) => (CommandKind::Cohomology, o),
            Command::Oracle(o) => (CommandKind::Oracle, o),
            Command::Ring(o) => (CommandKind::Ring, o),
            Command::Verify(o) => (CommandKind::Verify, o),
            Command::Stabilize(o) => (CommandKind::Stabilize, o),
        }
    }
}
