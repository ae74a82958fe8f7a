use std::io;
use std::process::ExitCode;

use clap::Parser;

use chaotic_iterations::cli::{error_exit_code, run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli, &mut io::stdout().lock(), &mut io::stderr().lock()) {
        Ok(outcome) => ExitCode::from(outcome.exit_code()),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(error_exit_code(&err))
        }
    }
}
