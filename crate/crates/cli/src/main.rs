use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;
use qad_cli::args::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut stderr = io::stderr().lock();
    let table = match qad_cli::execute(&cli, &mut stderr) {
        Ok(t) => t,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let mut stdout = io::stdout().lock();
    match table.write(&mut stdout, cli.global.format, cli.global.digits.into()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let _ = writeln!(stderr, "error: writing output: {e}");
            ExitCode::FAILURE
        }
    }
}
