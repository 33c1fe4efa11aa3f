mod args;
mod error;
mod mdp;
mod render;
mod solve;
mod tools;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use error::CliError;

fn run(cli: &Cli) -> Result<u8, CliError> {
    if let Some(n) = cli.jobs {
        if n == 0 {
            return Err(CliError::Usage("--jobs must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Internal(e.to_string()))?;
    }
    match &cli.command {
        Command::Solve(a) => solve::run(a, cli.format),
        Command::CheckProof { trace } => tools::check(trace, cli.format),
        Command::Reach(a) => mdp::reach(a, cli.format),
        Command::Stability(a) => mdp::stability(a, cli.format),
        Command::Oracle(a) => tools::oracle(a, cli.format),
        Command::Gen { what } => tools::generate(what),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
