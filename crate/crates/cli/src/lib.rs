//! Command-line front end: space descriptions, built-in examples,
//! subcommands and reports.

pub mod args;
pub mod builtins;
pub mod commands;
pub mod error;
pub mod report;
pub mod spec;

use std::panic::{self, AssertUnwindSafe};

use args::{Cli, Format};
use commands::Failure;
use error::CliError;

/// What a finished invocation prints and returns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    /// The report (or, in JSON mode, an error document).
    pub output: String,
    pub diagnostics: String,
    pub code: i32,
}

/// Runs a parsed command line without touching stdout, stderr or `--out`.
pub fn execute(cli: &Cli) -> Outcome {
    let common = cli.command.common();
    let name = cli.command.name();
    let result = panic::catch_unwind(AssertUnwindSafe(|| commands::run(&cli.command)))
        .unwrap_or_else(|_| Err(CliError::Internal("internal invariant failure".into())));
    match result {
        Ok((report, failure)) => {
            let output = match common.format {
                Format::Json => report.render_json(),
                Format::Text => report.text,
            };
            let (code, diagnostics) = match failure {
                Some(Failure::Unknown(msg)) if common.strict => (3, format!("loopcoh: {msg}\n")),
                Some(Failure::Unknown(_)) | None => (0, String::new()),
                Some(Failure::Invariant(msg)) => (4, format!("loopcoh: {msg}\n")),
            };
            Outcome {
                output,
                diagnostics,
                code,
            }
        }
        Err(e) => {
            let kind = match e.exit_code() {
                2 => "spec",
                3 => "hypothesis",
                _ => "internal",
            };
            let output = match common.format {
                Format::Json => report::error_json(name, kind, &e.to_string()),
                Format::Text => String::new(),
            };
            Outcome {
                output,
                diagnostics: format!("loopcoh: {e}\n"),
                code: e.exit_code(),
            }
        }
    }
}
