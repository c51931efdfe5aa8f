//! Command-line and HTTP front end of the cost estimation toolkit.

pub mod api;
pub mod args;
pub mod commands;
pub mod error;
pub mod manifest;
pub mod server;

use args::{Cli, Command};
use commands::{DataRoot, Outcome};
use error::CliResult;

/// Runs a parsed command line except `serve`, which blocks.
pub fn run(cli: &Cli, root: &DataRoot) -> CliResult<Outcome> {
    match &cli.command {
        Command::Screen(c) => commands::screen(root, c),
        Command::Fit(c) => commands::fit(root, c),
        Command::Predict(a) => commands::predict(a),
        Command::Bench(a) => commands::bench(root, a),
        Command::Serve(_) => Err(error::CliError::internal("serve is not a batch command")),
    }
}
