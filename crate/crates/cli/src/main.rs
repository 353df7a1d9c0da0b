//! `eop`: figure scenarios, CSV/SVG output and the oracle suite.
//!
//! Exit status: 0 success, 1 invalid flags or parameters, 2 inadmissible
//! `(alpha, beta, m)`, 3 numerical, I/O or validation failure.

mod args;
mod config;
mod output;
mod run;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use thiserror::Error;

use crate::args::{Cli, Command};
use crate::config::RunConfig;

#[derive(Debug, Error)]
pub enum Failure {
    #[error("{0}")]
    Usage(String),
    #[error("{context}: {source}")]
    Core { context: String, source: eop_core::Error },
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("writing CSV: {0}")]
    Csv(#[from] csv::Error),
    #[error("{failed} validation check(s) failed")]
    Validation { failed: usize },
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Core { source, .. } if source.is_parameter() => 1,
            Failure::Core { source, .. } if source.is_inadmissible() => 2,
            _ => 3,
        }
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(v) = std::env::var("EOP_THREADS") else { return Ok(()) };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::Usage(format!("EOP_THREADS must be a positive integer, got `{v}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Usage(format!("EOP_THREADS: {e}")))
}

fn validate() -> Result<(), Failure> {
    let checks = eop_core::validation::run_all();
    let width = checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
    println!("{:<10} {:<width$} {:>12} {:>9}  result", "module", "check", "measured", "tol");
    let mut failed = 0;
    for c in &checks {
        let verdict = if c.passed { "PASS" } else { "FAIL" };
        println!("{:<10} {:<width$} {:>12.3e} {:>9.1e}  {verdict}", c.module, c.name, c.measured, c.tolerance);
        if let Some(msg) = &c.failure {
            println!("{:<10} {:<width$}   error: {msg}", "", "");
        }
        failed += usize::from(!c.passed);
    }
    println!("{} checks, {} passed, {failed} failed", checks.len(), checks.len() - failed);
    if failed > 0 {
        return Err(Failure::Validation { failed });
    }
    Ok(())
}

fn execute(cli: Cli) -> Result<(), Failure> {
    let cfg = RunConfig::from_cli(&cli)?;
    configure_threads()?;
    if cfg.command == Command::Validate {
        return validate();
    }
    let mut out = run::run(&cfg)?;
    for note in &out.meta.notes {
        eprintln!("note: {note}");
    }
    output::emit(&mut out, cfg.out.as_deref(), cfg.format)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
