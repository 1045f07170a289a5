use std::io;
use std::process::ExitCode;

use anisotachy_cli::{configure_threads, parse_args, run, CliError};

fn main() -> ExitCode {
    let result = configure_threads()
        .and_then(|()| parse_args(std::env::args_os()))
        .and_then(|spec| run(&spec, &mut io::stdout().lock(), &mut io::stderr().lock()));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        // clap prints help, version and usage errors in its own format.
        Err(CliError::Args(e)) => e.exit(),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
