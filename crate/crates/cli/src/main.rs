//! `spikeinfo` command-line front end.
//!
//! Every subcommand writes one JSON report (tool, version, command, config
//! echo, result) to `--output` or stdout. Exit status is 0 on success, 2 for
//! invalid arguments or inputs, and 1 for I/O failures.

mod args;
mod commands;
mod error;
mod io;
mod report;

use std::process::ExitCode;

use clap::Parser;

use crate::args::{Cli, Command};
use crate::error::CliResult;
use crate::report::Report;

fn run(cli: Cli) -> CliResult<()> {
    let name = cli.command.name();
    let (outcome, output) = match &cli.command {
        Command::Simulate(a) => (commands::simulate(a)?, a.output.as_deref()),
        Command::Entropy(a) => (commands::entropy(a)?, a.output.as_deref()),
        Command::Mi(a) => (commands::mi(a)?, a.output.as_deref()),
        Command::Te(a) => (commands::te(a)?, a.output.as_deref()),
        Command::Capacity(a) => (commands::capacity(a)?, a.output.as_deref()),
        Command::SpikeEntropy(a) => (commands::spike_entropy(a)?, a.output.as_deref()),
    };
    let (config, result) = outcome;
    let text = Report::new(name, config, result).to_json()?;
    io::emit(output, &text)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
