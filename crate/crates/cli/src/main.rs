mod args;
mod commands;

use std::io::Write;
use std::process::ExitCode;

use admcover_core::smooth_cover::HurwitzOracle;
use clap::Parser;

use args::{Cli, Command, Format};
use commands::{Failure, EXIT_INPUT};

/// Caps rayon's pool when `ADMCOVER_THREADS` is set.
fn configure_threads() -> Result<(), Failure> {
    let Ok(value) = std::env::var("ADMCOVER_THREADS") else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| {
            Failure::input(
                "invalid_environment",
                format!("ADMCOVER_THREADS={value} is not a positive integer"),
            )
        })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::input("invalid_environment", e.to_string()))
}

fn execute(cli: &Cli) -> Result<(String, u8), Failure> {
    configure_threads()?;
    let oracle = HurwitzOracle::new(cli.bounds).map_err(|e| Failure::coded(e.code(), &e))?;
    // export-dot prints DOT whatever the format.
    let format = match cli.command {
        Command::ExportDot { .. } => Format::Dot,
        _ => cli.format,
    };
    let outcome = commands::run(&cli.command, &oracle)?;
    Ok((outcome.render(format)?, outcome.exit))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok((output, exit)) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(output.as_bytes()).is_err() {
                return ExitCode::from(EXIT_INPUT);
            }
            ExitCode::from(exit)
        }
        Err(f) => {
            eprintln!("error[{}]: {}", f.code, f.message);
            ExitCode::from(f.exit)
        }
    }
}
