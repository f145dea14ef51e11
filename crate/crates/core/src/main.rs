use std::process::ExitCode;

use clap::Parser;
use gfcount::cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {}", e.error());
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    if let Err(e) = outcome.emit() {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    for r in outcome.reports.iter().filter(|r| !r.pass) {
        eprintln!("failed: {} {}", r.identity_name, r.parameters);
    }
    ExitCode::from(outcome.exit_code() as u8)
}
