//! `ffrank`: identity suites, single-curve reports, family surveys, prime-table caching.
//!
//! Exit codes: 0 success, 1 a mathematical invariant failed, 2 usage or configuration error.

mod cli;

use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let args = cli::Cli::parse();
    match cli::run(args) {
        Ok(code) => code.into(),
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code().into()
        }
    }
}
