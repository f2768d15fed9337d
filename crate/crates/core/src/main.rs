use std::process::ExitCode;

use clap::Parser;

use scaffold_order::cli::{execute, Cli, CliError, EXIT_ERROR, THREADS_ENV};

fn configure_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .map_err(|_| format!("{THREADS_ENV} must be a positive integer, got {raw:?}"))?;
    if threads == 0 {
        return Err(format!("{THREADS_ENV} must be a positive integer, got 0"));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(msg) = configure_threads() {
        eprintln!("error: {msg}");
        return ExitCode::from(EXIT_ERROR as u8);
    }
    let output = cli.command.output().clone();
    let outcome = match execute(&cli.command) {
        Ok(outcome) => outcome,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_ERROR as u8);
        }
    };
    let text = outcome.document.render(output.format);
    match &output.out {
        Some(path) => {
            if let Err(source) = std::fs::write(path, &text) {
                let e = CliError::Io {
                    path: path.clone(),
                    source,
                };
                eprintln!("error: {e}");
                return ExitCode::from(EXIT_ERROR as u8);
            }
        }
        None => print!("{text}"),
    }
    if let Some(diag) = outcome.diagnostic {
        eprintln!("{diag}");
    }
    ExitCode::from(outcome.exit_code as u8)
}
