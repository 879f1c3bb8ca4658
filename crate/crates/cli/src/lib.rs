//! Command-line front end for the `ablation-heat` solvers.

pub mod args;
mod commands;
mod output;
mod sampling;
mod verify;

use std::ffi::OsString;
use std::fmt;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command};

/// Environment variable capping the worker threads (0 = automatic).
pub const THREADS_ENV: &str = "ABLATION_HEAT_THREADS";

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_ACCURACY: i32 = 2;

#[derive(Debug)]
pub enum CliError {
    /// Bad input: parameters, flags, files, grid specifications.
    Invalid(String),
    /// The computation ran but did not reach the requested accuracy or a
    /// check failed.
    Accuracy(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Invalid(m) | CliError::Accuracy(m) => f.write_str(m),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => EXIT_INVALID,
            CliError::Accuracy(_) => EXIT_ACCURACY,
        }
    }
}

impl From<ablation_heat::Error> for CliError {
    fn from(e: ablation_heat::Error) -> Self {
        use ablation_heat::Error as E;
        match e {
            E::Accuracy { .. } | E::RootFinding(_) | E::Instability { .. } | E::HorizonExceeded { .. } => {
                CliError::Accuracy(e.to_string())
            }
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Invalid(format!("i/o error: {e}"))
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Invalid(format!("csv error: {e}"))
    }
}

pub type CliResult<T> = Result<T, CliError>;

fn configure_threads() -> CliResult<()> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| CliError::Invalid(format!("{THREADS_ENV} must be a non-negative integer, got `{raw}`")))?;
    if n > 0 {
        // a pool may already exist when called twice in one process
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

/// Parses `argv` (including the program name), runs the command and returns
/// the process exit code. Errors are reported on standard error.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_INVALID,
            };
        }
    };
    let result = configure_threads().and_then(|_| dispatch(cli.command));
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(command: Command) -> CliResult<()> {
    match command {
        Command::Params(c) => commands::params(&c),
        Command::Steady(c) => commands::steady(&c),
        Command::Transient(c) => commands::transient(&c),
        Command::Eigen(c) => commands::eigen(&c),
        Command::Series(c) => commands::series(&c),
        Command::Oracle(c) => commands::oracle(&c),
        Command::Specfun(c) => commands::specfun(&c),
        Command::Verify(c) => verify::run(&c),
    }
}
