use std::io;
use std::process::ExitCode;

use clap::Parser;

use chocolate_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdin = io::stdin();
    match run(cli, stdin.lock(), io::stdout().lock()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("choc: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
