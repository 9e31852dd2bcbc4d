#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod args;
mod commands;
mod config;
mod error;
mod state;
mod table;
mod validate;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::Parser;

use crate::args::Cli;
use crate::config::{RunConfig, Task};
use crate::error::CliError;

fn open_output(config: &RunConfig) -> Result<Box<dyn Write>, CliError> {
    Ok(match &config.out {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).map_err(|e| CliError::Output(format!("{}: {e}", path.display())))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn run(config: &RunConfig) -> Result<(), CliError> {
    let table = match config.task {
        Task::Series { .. } => commands::series(config)?,
        Task::DeltaMax { .. } => commands::deltamax(config)?,
        Task::Current => commands::current(config)?,
        Task::Validate => {
            let groups = validate::run_all(config)?;
            let mut out = open_output(config)?;
            out.write_all(validate::render(&groups, config.format).as_bytes())?;
            out.flush()?;
            return match validate::failures(&groups) {
                0 => Ok(()),
                failed => Err(CliError::Validation { failed }),
            };
        }
    };
    let mut out = open_output(config)?;
    table.write(config.format, &mut out)?;
    out.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = RunConfig::from_cli(cli).and_then(|config| run(&config));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("backflow: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
