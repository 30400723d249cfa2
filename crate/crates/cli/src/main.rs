//! `dicke2`: spectra, G-function curves, exceptional couplings and the
//! reference diagonalization, as CSV or JSON.
//!
//! Exit codes: 0 on success, 1 on invalid input or I/O failure, 2 when some
//! points of a run failed (their rows are kept in the output).

mod commands;
mod config;
mod table;

use std::io::Write;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::Parser;

use crate::config::{read_config_file, Cli, Format, RunConfig, MAX_TERMS_ENV};

fn run() -> Result<bool> {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            e.print()?;
            return Err(anyhow::anyhow!("invalid arguments"));
        }
        Err(e) => {
            // --help and --version
            e.print()?;
            return Ok(true);
        }
    };
    let mut options = cli.options;
    if let Some(path) = options.config.clone() {
        options = options.merged_with(read_config_file(&path)?);
    }
    let max_terms = std::env::var(MAX_TERMS_ENV).ok();
    let config = RunConfig::resolve(cli.command, options, max_terms.as_deref())?;

    let output = commands::run(&config)?;
    let bytes = match config.format {
        Format::Csv => output.table.to_csv()?,
        Format::Json => output.table.to_json(config.command.as_str(), output.meta)?,
    };
    match &config.out {
        Some(path) => std::fs::write(path, &bytes).with_context(|| format!("writing {}", path.display()))?,
        None => std::io::stdout().lock().write_all(&bytes).context("writing stdout")?,
    }
    for note in &output.notes {
        eprintln!("{}: {note}", config.command.as_str());
    }
    Ok(!output.partial)
}

fn main() -> ExitCode {
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
