use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use alphaflip::cli::{execute, exit_status, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(outcome) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(outcome.output.as_bytes());
            ExitCode::from(outcome.status as u8)
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_status(err.kind()) as u8)
        }
    }
}
