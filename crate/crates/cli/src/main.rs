//! `ptnet` command-line driver.
//!
//! Exit status: 0 on success, 2 for rejected input, 3 when the numerics
//! cannot proceed (exceptional point, broken phase, failed decomposition).

mod args;
mod commands;
mod emit;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use args::Cli;
use commands::{run, Failure, Rendered};

fn write_all(r: &Rendered) -> Result<(), Failure> {
    let io = |what: &str, e: std::io::Error| Failure::Invalid(format!("cannot write {what}: {e}"));
    match &r.output {
        Some(path) => std::fs::write(path, &r.body).map_err(|e| io(&path.display().to_string(), e))?,
        None => std::io::stdout()
            .lock()
            .write_all(r.body.as_bytes())
            .map_err(|e| io("stdout", e))?,
    }
    if let Some((path, text)) = &r.report {
        std::fs::write(path, text).map_err(|e| io(&path.display().to_string(), e))?;
    }
    if let Some(notice) = &r.notice {
        eprintln!("{notice}");
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command).and_then(|r| write_all(&r)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.exit_code())
        }
    }
}
