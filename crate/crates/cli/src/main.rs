mod args;
mod commands;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use commands::Outcome;

fn dispatch(command: &Command) -> Outcome {
    match command {
        Command::Simulate(a) => commands::simulate(a),
        Command::Replay(a) => commands::replay(a),
        Command::Stats(a) => commands::stats(a),
        Command::Table(a) => commands::table(a),
        Command::Verify(a) => commands::verify(a),
    }
}

fn main() -> ExitCode {
    // clap exits with status 2 on usage errors.
    let cli = Cli::parse();
    let out = dispatch(&cli.command);
    let _ = std::io::stdout().write_all(out.stdout.as_bytes());
    let _ = std::io::stderr().write_all(out.stderr.as_bytes());
    ExitCode::from(out.code as u8)
}
