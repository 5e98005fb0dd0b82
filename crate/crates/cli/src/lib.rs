//! Command-line front end: argument parsing, command dispatch and output
//! encoding. The binary is a thin wrapper around [`entry`].

use std::ffi::OsString;
use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

pub mod args;
pub mod commands;
pub mod error;
pub mod output;

use args::{Cli, Command, Format};
pub use error::CliError;
pub use output::{Cell, OutputRecord, Table};

/// Result of one invocation; `ok` is false only for a failed verification.
pub struct Outcome {
    pub record: OutputRecord,
    pub ok: bool,
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let record = match &cli.command {
        Command::Plan(a) => commands::plan(a, &commands::resolve_species(&a.species, "electron")?)?,
        Command::Spectrum(a) => commands::spectrum(a, &commands::resolve_species(&a.species, "nacl")?)?,
        Command::Curve(a) => commands::curve(a, &commands::resolve_species(&a.species, "electron")?)?,
        Command::Scan(a) => commands::scan(a)?,
        Command::Verify(a) => {
            let (record, ok) = commands::verify(a)?;
            return Ok(Outcome { record, ok });
        }
    };
    Ok(Outcome { record, ok: true })
}

fn emit(cli: &Cli, text: &str) -> Result<(), CliError> {
    match &cli.output {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        }),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|source| CliError::Io {
            path: "stdout".into(),
            source,
        }),
    }
}

/// Parses `args` (program name first), runs, writes the record and maps the exit code.
pub fn entry(args: impl IntoIterator<Item = OsString>) -> ExitCode {
    let cli = Cli::parse_from(args);
    let result = run(&cli).and_then(|outcome| {
        let text = match cli.format {
            Format::Csv => outcome.record.to_csv(),
            Format::Json => outcome.record.to_json(),
        };
        emit(&cli, &text)?;
        Ok(outcome.ok)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("error: verification failed");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
