//! Driver for the `efimov` command: configuration, report generation and
//! exit-status policy.
//!
//! Exit statuses: 0 on success, 1 on I/O or convergence failure, 2 when the
//! masses admit no Efimov regime, 64 on usage errors.

pub mod commands;
pub mod config;
pub mod error;
pub mod report;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};

use clap::error::ErrorKind;
use clap::Parser;

pub use commands::{run, Outcome};
pub use config::{Cli, FileConfig, RunConfig};
pub use error::{CliError, EXIT_FAILURE, EXIT_NO_EFIMOV, EXIT_OK, EXIT_USAGE};
pub use report::Report;

/// Parses `args` (including the program name), runs the command, writes the
/// report, and returns the process exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
        }
    };
    match execute(&cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("efimov: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: &Cli) -> Result<(), CliError> {
    let file = match &cli.common.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    let config = RunConfig::resolve(cli, &file)?;
    let outcome = run(&config)?;
    match &config.output_path {
        Some(path) => {
            let f = File::create(path).map_err(|e| CliError::Io { path: path.clone(), source: e })?;
            let mut w = BufWriter::new(f);
            outcome.report.write(config.output, &mut w)?;
            w.flush().map_err(|e| CliError::Io { path: path.clone(), source: e })?;
        }
        None => {
            let stdout = io::stdout();
            match outcome.report.write(config.output, stdout.lock()) {
                // a closed reader (`| head`) is not an error
                Err(CliError::Output(e)) if e.kind() == io::ErrorKind::BrokenPipe => return Ok(()),
                other => other?,
            }
        }
    }
    for w in &outcome.warnings {
        eprintln!("efimov: warning: {w}");
    }
    if outcome.failed {
        Err(CliError::Convergence("no level converged".into()))
    } else {
        Ok(())
    }
}
