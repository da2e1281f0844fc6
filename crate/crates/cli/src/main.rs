mod args;
mod commands;
mod output;

use args::{Cli, Command};
use clap::Parser;
use std::process::ExitCode;

fn main() -> ExitCode {
    // clap exits with code 2 on malformed arguments.
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Tail(a) => commands::tail(a),
        Command::Curve(a) => commands::curve(a),
        Command::Invert(a) => commands::invert(a),
        Command::Validate(a) => commands::validate(a),
        Command::Mc(a) => commands::mc(a),
        Command::Diversity(a) => commands::diversity(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("powertail: {f}");
            ExitCode::from(f.exit_code() as u8)
        }
    }
}
