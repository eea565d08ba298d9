use std::process::ExitCode;

use ahg_cli::cli::Cli;
use clap::Parser;

fn main() -> ExitCode {
    // clap exits with status 2 on usage errors, matching the contract
    let cli = Cli::parse();
    match ahg_cli::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ahg: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
