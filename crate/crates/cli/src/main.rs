use std::process::ExitCode;

use clap::Parser;
use swave::args::Cli;

fn main() -> ExitCode {
    match swave::execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("swave: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
