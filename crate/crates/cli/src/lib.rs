//! Command-line front end for the `ldpcgm` toolkit.
//!
//! Every subcommand writes one text file (or stdout) that starts with a
//! `#` header holding the tool version and the resolved settings, so a
//! rerun with the same settings reproduces the file byte for byte.

pub mod commands;
pub mod config;

use std::process::ExitCode;

use clap::{Parser, Subcommand};
use thiserror::Error;

use config::Flags;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad or inconsistent settings (exit code 2).
    #[error("{0}")]
    Validation(String),
    /// A computation or I/O failure (exit code 1).
    #[error("{0}")]
    Runtime(String),
}

impl From<ldpcgm::Error> for CliError {
    fn from(e: ldpcgm::Error) -> Self {
        if e.is_validation() {
            CliError::Validation(e.to_string())
        } else {
            CliError::Runtime(e.to_string())
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "ldpcgm", version, about = "Weight enumerators, growth rates, BEC density evolution and simulation for LDPC-GM codes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// w_o, w_ub and H(a) - (1-R) ln 2 on a uniform grid of a.
    GrowthRate(Flags),
    /// Exact ensemble weight distributions of the outer and concatenated codes.
    Enumerate(Flags),
    /// Density-evolution report for a capacity-achieving construction.
    De(Flags),
    /// Monte Carlo sweep of BP and ML erasure decoding.
    Simulate(Flags),
    /// delta_o, delta' and delta_GV for (j, k).
    Threshold(Flags),
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::GrowthRate(f) => commands::growth_rate(&f),
        Command::Enumerate(f) => commands::enumerate(&f),
        Command::De(f) => commands::de(&f),
        Command::Simulate(f) => commands::simulate(&f),
        Command::Threshold(f) => commands::threshold(&f),
    }
}

/// Parses the process arguments, runs, and maps errors to exit codes.
pub fn main_with_args() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
