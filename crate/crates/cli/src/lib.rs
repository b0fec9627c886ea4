//! Command-line front end for `bfdx-core`.
//!
//! Exit codes: 0 on success, 1 when a requested region, range or threshold
//! does not exist for the inputs (the output still reports it, with empty
//! fields), 2 on usage errors and numerical failures.

use std::ffi::OsString;
use std::io::{self, Write};

use clap::error::ErrorKind;
use clap::Parser;
use thiserror::Error;

pub mod args;
mod commands;
pub mod figures;
pub mod output;

pub use figures::{emit_figure_data, Figure, FigureParams};
pub use output::Format;

pub const EXIT_OK: i32 = 0;
pub const EXIT_EMPTY: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] bfdx_core::Error),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
}

/// Runs the CLI on `argv` (program name first) with the process streams.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = io::stdout();
    let stderr = io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match args::Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_ERROR
                }
            };
        }
    };
    let outcome = match commands::execute(cli.command) {
        Ok(outcome) => outcome,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if matches!(e, CliError::Usage(_)) {
                let _ = writeln!(err, "\nFor more information, try '--help'.");
            }
            return EXIT_ERROR;
        }
    };
    if let Err(e) = outcome
        .output
        .write(cli.format, out)
        .and_then(|()| out.flush())
    {
        let _ = writeln!(err, "error: i/o error: {e}");
        return EXIT_ERROR;
    }
    if outcome.complete {
        EXIT_OK
    } else {
        let _ = writeln!(
            err,
            "note: the requested region or target does not exist for these inputs"
        );
        EXIT_EMPTY
    }
}
