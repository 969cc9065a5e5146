//! Command-line front end for `coherent-id`.
//!
//! [`execute`] computes a command's output without touching the filesystem
//! beyond reading inputs; [`run`] writes it out and maps the result to an
//! exit code (0 success, 1 validation error, 2 oracle failure).

pub mod commands;
pub mod config;
pub mod output;
pub mod verify;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::Parser;

pub use config::{Cli, Command, Flags, Format, Params};
pub use output::Report;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_ORACLE: i32 = 2;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Io(String),
}

impl From<coherent_id::Error> for CliError {
    fn from(e: coherent_id::Error) -> Self {
        CliError::Validation(e.to_string())
    }
}

/// Everything an invocation produces.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: Report,
    /// Rendered table in the requested format.
    pub text: String,
    pub out: Option<PathBuf>,
    /// Extra files such as a codebook.
    pub files: Vec<(PathBuf, String)>,
    pub oracle_failed: bool,
}

pub fn execute(command: &Command) -> Result<Outcome, CliError> {
    let params = Params::resolve(command.flags())?;
    let mut files = Vec::new();
    let mut oracle_failed = false;
    let report = match command {
        Command::Bounds(_) => commands::bounds(&params)?,
        Command::Pack(_) => {
            let out = commands::pack(&params)?;
            files.extend(out.code_file);
            out.report
        }
        Command::Simulate(_) => commands::simulate(&params)?,
        Command::Heterodyne(_) => commands::heterodyne(&params)?,
        Command::Verify(_) => {
            let (report, ok) = commands::verify(&params)?;
            oracle_failed = !ok;
            report
        }
    };
    Ok(Outcome {
        text: report.render(params.format),
        report,
        out: params.out.clone(),
        files,
        oracle_failed,
    })
}

fn write_file(path: &PathBuf, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text)
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

/// Execute, write outputs, return the exit code.
pub fn run(command: &Command) -> i32 {
    let outcome = match execute(command) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_VALIDATION;
        }
    };
    let written = outcome
        .files
        .iter()
        .try_for_each(|(p, t)| write_file(p, t))
        .and_then(|()| match &outcome.out {
            Some(p) => write_file(p, &outcome.text),
            None => std::io::stdout()
                .write_all(outcome.text.as_bytes())
                .map_err(|e| CliError::Io(e.to_string())),
        });
    if let Err(e) = written {
        eprintln!("error: {e}");
        return EXIT_VALIDATION;
    }
    if outcome.oracle_failed {
        eprintln!("error: oracle checks failed");
        return EXIT_ORACLE;
    }
    EXIT_OK
}

/// Parse arguments and run. Usage errors map to the validation exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli.command),
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_VALIDATION
            } else {
                EXIT_OK
            };
            let _ = e.print();
            code
        }
    }
}
