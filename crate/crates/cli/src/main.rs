//! `htl` command-line driver.

mod args;
mod commands;
mod input;
mod output;

use std::process::ExitCode;

use clap::Parser;
use htl_core::{Error, ErrorClass};

use args::{Cli, Command};

fn exit_code(class: ErrorClass) -> u8 {
    match class {
        ErrorClass::BadInput => 2,
        ErrorClass::Domain => 3,
        ErrorClass::Anomaly => 4,
    }
}

fn run(cli: &Cli) -> Result<Option<String>, Error> {
    if let Some(n) = cli.threads.filter(|&n| n > 0) {
        // Fails only if a pool already exists, which cannot happen this early.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    let out = match &cli.command {
        Command::Apply(a) => commands::apply(a)?,
        Command::Norm(a) => commands::norm(a)?,
        Command::Constants(a) => commands::constants(a)?,
        Command::Verify(a) => commands::verify(a)?,
        Command::Slice(a) => commands::slice(a)?,
        Command::Search(a) => commands::search(a)?,
        Command::Equivalence(a) => commands::equivalence(a)?,
    };
    out.write(cli.format, cli.output.as_deref())?;
    Ok(out.anomaly)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(None) => ExitCode::SUCCESS,
        Ok(Some(msg)) => {
            eprintln!("htl: anomaly: {msg}");
            ExitCode::from(exit_code(ErrorClass::Anomaly))
        }
        Err(e) => {
            eprintln!("htl: error: {e}");
            ExitCode::from(exit_code(e.class()))
        }
    }
}
