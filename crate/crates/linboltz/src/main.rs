//! `linboltz` command-line tool.

use std::process::ExitCode;

use clap::Parser;
use linboltz::cli::{run, Cli, USAGE_ERROR};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(outcome) => ExitCode::from(outcome.code()),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(USAGE_ERROR)
        }
    }
}
