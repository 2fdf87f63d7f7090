mod args;
mod commands;
mod error;
mod manifest;
mod output;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Simulate(a) => commands::simulate_cmd(a),
        Command::Sweep(a) => commands::sweep_cmd(a),
        Command::CriticalLengths(a) => commands::critical_lengths_cmd(a),
        Command::Spectrum(a) => commands::spectrum_cmd(a),
        Command::Resolvent(a) => commands::resolvent_cmd(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
