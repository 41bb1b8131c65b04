mod commands;
mod config;
mod exit;
mod output;
mod validate;

use std::process;

use clap::error::ErrorKind;
use clap::Parser;

use crate::config::{Cli, Command};
use crate::exit::{ExitCode, Failure};

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp
                | ErrorKind::DisplayVersion
                | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => 0,
                _ => ExitCode::Usage as i32,
            };
            // clap picks stdout or stderr itself
            let _ = err.print();
            process::exit(code);
        }
    };
    if let Err(failure) = run(cli) {
        eprintln!("error: {failure}");
        process::exit(failure.code as i32);
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            return Err(Failure::usage("--jobs must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| Failure::usage(format!("cannot start thread pool: {e}")))?;
    }
    match cli.command {
        Command::Compute(args) => commands::compute(&args),
        Command::Sweep(args) => commands::sweep(&args),
        Command::Slices(args) => commands::slices(&args),
        Command::Generate(args) => commands::generate(&args),
        Command::Validate(args) => validate::run(&args),
    }
}
