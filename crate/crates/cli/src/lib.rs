//! Standard-library companion to `ahg-core`: JSON and CSV formats, the
//! `ahg` command line and the verification suites it runs.

pub mod cli;
pub mod commands;
pub mod error;
pub mod grid;
pub mod io;
pub mod samples;
pub mod verify;

use cli::{Cli, Command};
use error::{CliError, CliResult};

/// Executes a parsed command line. Verification reports go to standard output.
pub fn run(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::EvalGrid(a) => commands::eval_grid(a),
        Command::Transform(a) => commands::transform(a),
        Command::Wvd(a) => commands::wvd(a),
        Command::Expand(a) => commands::expand_cmd(a),
        Command::Verify(a) => {
            let cfg = verify::VerifyConfig { n: a.n, max_order: a.max_order, tol: a.tol, seed: a.seed };
            let checks = verify::run(a.suite, &cfg)?;
            print!("{}", verify::report(&checks));
            match checks.iter().filter(|c| !c.passed()).count() {
                0 => Ok(()),
                k => Err(CliError::Failed(k)),
            }
        }
    }
}
