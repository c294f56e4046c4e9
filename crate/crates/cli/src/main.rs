//! `slicepool` command-line harness.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 capacity or
//! address-space exhaustion.

mod args;
mod commands;
mod index;
mod io_util;

use std::fmt;
use std::process::ExitCode;

use clap::Parser;

use crate::args::{Cli, Command};

/// A post-parse usage problem (argument combinations clap cannot express).
#[derive(Debug)]
pub struct UsageError(String);

impl UsageError {
    pub fn new(message: impl Into<String>) -> Self {
        UsageError(message.into())
    }
}

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for UsageError {}

fn exit_code_for(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<UsageError>().is_some() {
        return 1;
    }
    match err.downcast_ref::<slicepool::Error>() {
        Some(
            slicepool::Error::SegmentFull { .. }
            | slicepool::Error::AddressSpaceExhausted { .. }
            | slicepool::Error::PositionOverflow { .. },
        ) => 3,
        _ => 2,
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Build(args) => commands::build::run(&args),
        Command::Query(args) => commands::query::run(&args),
        Command::Sweep(args) => commands::sweep::run(&args),
        Command::Gen(args) => commands::generate::run(&args),
        Command::Stats(args) => commands::stats::run(&args),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // Help and version are successful outputs, not usage errors.
            let _ = err.print();
            return match err.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    ExitCode::SUCCESS
                }
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}
