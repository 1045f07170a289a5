//! Command-line front end for the `anisotachy` library.
//!
//! The binary is a thin wrapper around [`run`]; everything here is public so
//! the integration tests can drive commands without spawning processes.

use std::ffi::OsString;
use std::io::{self, Write};

use clap::Parser;

pub mod args;
pub mod commands;
pub mod config_file;
pub mod csv;
pub mod numbers;
pub mod presets;
pub mod spec;

pub use args::Cli;
pub use commands::{execute, Outcome};
pub use spec::RunSpec;

/// Environment variable that caps the worker thread count.
pub const THREADS_VAR: &str = "ANISOTACHY_THREADS";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Rejected by the argument parser, including help and version requests.
    #[error(transparent)]
    Args(#[from] clap::Error),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Model(#[from] anisotachy::Error),
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
}

impl CliError {
    /// 2 for usage and validation errors, 1 for runtime failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Args(e) => e.exit_code(),
            CliError::Usage(_) => 2,
            CliError::Model(anisotachy::Error::InvalidParameter { .. } | anisotachy::Error::DarkState { .. }) => 2,
            CliError::Model(_) | CliError::Io { .. } => 1,
        }
    }
}

pub fn parse_args<I, T>(argv: I) -> Result<RunSpec, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv)?;
    RunSpec::from_cli(cli)
}

/// Applies the thread override once per process.
pub fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("{THREADS_VAR} must be a positive integer, got `{raw}`")))?;
    // A second call in the same process finds the pool already built.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

/// Runs a spec, sending CSV to its output file or `stdout`. Summaries go to
/// `stdout` when the CSV goes to a file and to `stderr` otherwise.
pub fn run(spec: &RunSpec, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), CliError> {
    let outcome = execute(spec)?;
    let output = match spec {
        RunSpec::Decay(s) => s.output.as_ref(),
        RunSpec::Intensity(s) => s.output.as_ref(),
        RunSpec::Sweep(s) => s.output.as_ref(),
        RunSpec::Fisher(s) => s.output.as_ref(),
        RunSpec::Optimize { .. } | RunSpec::Presets => None,
    };
    match (outcome.csv, output) {
        (Some(csv), Some(path)) => {
            std::fs::write(path, csv).map_err(|e| io_error(&path.display().to_string(), e))?;
            write!(stdout, "{}", outcome.summary).map_err(|e| io_error("stdout", e))?;
            writeln!(stdout, "wrote {}", path.display()).map_err(|e| io_error("stdout", e))?;
        }
        (Some(csv), None) => {
            stdout.write_all(csv.as_bytes()).map_err(|e| io_error("stdout", e))?;
            write!(stderr, "{}", outcome.summary).map_err(|e| io_error("stderr", e))?;
        }
        (None, _) => write!(stdout, "{}", outcome.summary).map_err(|e| io_error("stdout", e))?,
    }
    Ok(())
}

fn io_error(path: &str, source: io::Error) -> CliError {
    CliError::Io {
        path: path.to_string(),
        source,
    }
}
