mod commands;
mod config;
mod output;
mod verify;

use clap::Parser;
use config::{Cli, Command, RunConfig};
use hypflow_core::Error;
use std::process::ExitCode;

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Accuracy { .. } | Error::NoEigenfunctional { .. } => 1,
        _ => 2,
    }
}

fn init_threads() -> Result<(), String> {
    let Ok(v) = std::env::var("HYPFLOW_THREADS") else {
        return Ok(());
    };
    let n: usize = v.trim().parse().ok().filter(|n| *n > 0).ok_or_else(|| format!("HYPFLOW_THREADS must be a positive integer, got '{v}'"))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())
}

fn run(cli: &Cli) -> hypflow_core::Result<commands::Outcome> {
    let cfg = RunConfig::from_cli(cli)?;
    let out = match cfg.command {
        Command::MatrixElement => commands::matrix_element(&cfg),
        Command::Resonances => commands::resonances(&cfg),
        Command::Correlation => commands::correlation(&cfg),
        Command::FlatTrace => commands::flat_trace(&cfg),
        Command::Transform => commands::transform(&cfg),
        Command::Verify => verify::run(&cfg),
    }?;
    output::emit(cfg.out.as_deref(), &out.text)?;
    Ok(out)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Err(msg) = init_threads() {
        eprintln!("hypflow: {msg}");
        return ExitCode::from(2);
    }
    match run(&cli) {
        Ok(o) if o.ok => ExitCode::SUCCESS,
        Ok(_) => {
            eprintln!("hypflow {}: cross-check failed", cli.command.name());
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("hypflow {}: {e}", cli.command.name());
            ExitCode::from(exit_code(&e))
        }
    }
}
