//! `afdm`: reproducible command-line access to chirp-subcarrier ambiguity
//! surfaces, frame statistics and matched-filter sensing.

mod args;
mod commands;
mod context;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use context::{write_run_record, CliError, CliResult, Context};

fn run(cli: &Cli) -> CliResult<()> {
    if let Some(t) = cli.global.threads {
        if t == 0 {
            return Err(CliError::flags("--threads must be positive"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| CliError::flags(e.to_string()))?;
    }
    let ctx = Context::new(cli)?;
    let outcome = match &cli.command {
        Command::Subcarrier(a) => commands::subcarrier::run(&ctx, a)?,
        Command::Af(a) => commands::af::run(&ctx, a)?,
        Command::FrameAf(a) => commands::frame_af::run(&ctx, a)?,
        Command::ExpectedAf(a) => commands::expected_af::run(&ctx, a)?,
        Command::Sense(a) => commands::sense::run(&ctx, a)?,
        Command::Parallelogram(a) => commands::parallelogram::run(&ctx, a)?,
    };
    let run = write_run_record(&ctx, cli, Some(&outcome.params), &outcome.outputs)?;
    for path in outcome.outputs.iter().chain(std::iter::once(&run)) {
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("afdm {}: {e}", cli.command.name());
            ExitCode::from(e.code as u8)
        }
    }
}
