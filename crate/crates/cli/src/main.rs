use std::io::Write;
use std::process::ExitCode;

use anyhow::Context;
use clap::Parser;

use cuspcount_cli::{run, Cli, EXIT_PARSE};

/// Caps the worker pool used by the parallel enumerations.
const THREADS_VAR: &str = "CUSPCOUNT_THREADS";

fn configure_threads() -> anyhow::Result<()> {
    let Ok(value) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .with_context(|| format!("{THREADS_VAR} must be a positive integer, got {value:?}"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .context("configuring the thread pool")?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e:#}");
        return ExitCode::from(EXIT_PARSE);
    }
    match run(&cli) {
        Ok(output) => {
            let mut text = output.render(cli.pretty);
            if !text.is_empty() && !text.ends_with('\n') {
                text.push('\n');
            }
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(text.as_bytes()).is_err() {
                return ExitCode::FAILURE;
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
