use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use loopcoh::args::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = loopcoh::execute(&cli);
    let mut code = outcome.code;
    match &cli.command.common().out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &outcome.output) {
                eprintln!("loopcoh: cannot write {}: {e}", path.display());
                code = code.max(2);
            }
        }
        None => {
            let _ = std::io::stdout().write_all(outcome.output.as_bytes());
        }
    }
    eprint!("{}", outcome.diagnostics);
    ExitCode::from(code as u8)
}
