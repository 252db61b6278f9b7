//! Command-line front end for the s-wave implosion library.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod acceptance;
pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod table;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use args::{Cli, Command};
use config::{EvolveConfig, MomentsConfig, SweepConfig, WignerConfig};
use error::CliError;

/// Opens the output destination. Called only after the configuration has
/// been validated.
fn output(path: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

pub fn execute(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Moments(args) => {
            let cfg = MomentsConfig::resolve(&args)?;
            commands::moments(&cfg, output(args.common.output.as_deref())?)
        }
        Command::Evolve(args) => {
            let cfg = EvolveConfig::resolve(&args)?;
            let to_file = args.common.output.is_some();
            let out = output(args.common.output.as_deref())?;
            // the summary goes to stdout unless stdout already carries the CSV
            if to_file {
                commands::evolve(&cfg, out, io::stdout().lock())
            } else {
                commands::evolve(&cfg, out, io::stderr().lock())
            }
        }
        Command::Wigner(args) => {
            let cfg = WignerConfig::resolve(&args)?;
            let report = commands::wigner_report(&cfg)?;
            let mut out = output(args.common.output.as_deref())?;
            serde_json::to_writer_pretty(&mut out, &report).map_err(io::Error::from)?;
            writeln!(out)?;
            out.flush()?;
            Ok(())
        }
        Command::SweepGamma(args) => {
            let cfg = SweepConfig::resolve(&args)?;
            commands::sweep(&cfg, output(args.common.output.as_deref())?)
        }
        Command::Validate(args) => {
            let outcomes = acceptance::run(&args.only, |o| {
                println!("{o}");
            })?;
            let failed = outcomes.iter().filter(|o| !o.pass).count();
            if failed > 0 {
                return Err(CliError::Numerical(format!("{failed} of {} criteria failed", outcomes.len())));
            }
            Ok(())
        }
    }
}
