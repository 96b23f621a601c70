mod args;
mod commands;
mod error;
mod output;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use error::CliError;

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Cov(a) => commands::cov(a),
        Command::Simulate(a) => commands::simulate(a),
        Command::Diag(d) => commands::diag(d),
        Command::Compare(c) => commands::compare(c),
        Command::Replay(r) => commands::replay(r),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.threads {
        Some(0) => Err(CliError::usage("--threads: must be at least 1")),
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| run(cli.command)),
            Err(e) => Err(CliError::usage(format!("--threads: {e}"))),
        },
        None => run(cli.command),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
