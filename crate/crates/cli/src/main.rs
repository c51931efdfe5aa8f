use clap::Parser;
use fcip_cli::args::{Cli, Command};
use fcip_cli::commands::DataRoot;
use fcip_cli::error::{CliError, Exit};
use fcip_cli::manifest::RunManifest;
use fcip_cli::server::{serve, AppState};
use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit.code())
        }
    }
}

fn execute(cli: &Cli) -> Result<(), CliError> {
    if let Command::Serve(a) = &cli.command {
        let state = AppState::load(&a.model)?;
        if let Some(path) = &cli.manifest {
            let mut m = RunManifest::new("serve").set("host", &a.host).set("port", a.port);
            for p in &a.model {
                m = m.input(p.display().to_string());
            }
            m.write(path)?;
        }
        return serve(state, &a.host, a.port);
    }
    let outcome = fcip_cli::run(cli, &DataRoot::resolve())?;
    let mut out = std::io::stdout().lock();
    out.write_all(outcome.stdout.as_bytes())
        .and_then(|_| out.flush())
        .map_err(|e| CliError { exit: Exit::Internal, message: format!("stdout: {e}") })?;
    if let Some(path) = &cli.manifest {
        outcome.manifest.write(path)?;
    }
    match outcome.failure {
        Some(e) => Err(e),
        None => Ok(()),
    }
}
