use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use multicake_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut stdout = std::io::stdout().lock();
    let result = run(&cli, &mut stdout);
    let _ = stdout.flush();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("multicake: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
