//! `roughsum` — experiments with a prime-detecting identity: identity
//! residual scans, Type I / Type II decompositions over rough integers,
//! progression discrepancy profiles, and bilinear discrepancy bounds.
//!
//! Exit codes: 0 success, 1 invariant check failed, 2 usage error,
//! 3 I/O failure.

mod error;
mod output;
mod run;
mod spec;

use std::process::ExitCode;

use clap::Parser;

#[derive(Parser, Debug)]
#[command(
    name = "roughsum",
    version,
    about = "Prime-sum decomposition and progression-discrepancy experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: run::Command,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run::dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
