mod args;
mod commands;

use std::process::ExitCode;

use clap::Parser;
use pnp_subdiv::Execution;

use args::{Cli, Command};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let exec = if cli.sequential {
        Execution::Sequential
    } else {
        Execution::default()
    };
    let result = match &cli.command {
        Command::Refine(a) => commands::refine(a, exec),
        Command::Normals(a) => commands::normals(a, exec),
        Command::Metrics(a) => commands::metrics(a, exec),
        Command::Morph(a) => commands::morph_cmd(a, exec),
        Command::Colorize(a) => commands::colorize_cmd(a, exec),
        Command::Compare(a) => commands::compare(a, exec),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.kind().exit_code() as u8)
        }
    }
}
