use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use qnd_antenna::cli::{error_line, execute, exit_code, Command, Format, Sweep};
use qnd_antenna::Error;

/// Sensitivity and readout calculations for a ponderomotive QND antenna.
#[derive(Parser)]
#[command(version)]
struct Args {
    /// Flat `key = value` configuration file.
    #[arg(long)]
    config: PathBuf,
    /// budget, snr, stability, regime, evolve or speedmeter.
    #[arg(long)]
    command: String,
    /// Write the report here instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
    /// table, csv or json-lines.
    #[arg(long, default_value = "table")]
    format: String,
    /// key:start:stop:points:log|lin
    #[arg(long)]
    sweep: Option<String>,
}

fn run(args: &Args) -> Result<(), Error> {
    let command: Command = args.command.parse()?;
    let format: Format = args.format.parse()?;
    let sweep: Option<Sweep> = args.sweep.as_deref().map(str::parse).transpose()?;
    let path = args.config.display();
    let text =
        std::fs::read_to_string(&args.config).map_err(|e| Error::Io(format!("{path}: {e}")))?;
    for w in qnd_antenna::cli::config::RawConfig::parse(&text)
        .and_then(|raw| qnd_antenna::cli::config::build(&raw))
        .map(|c| c.warnings)
        .unwrap_or_default()
    {
        eprintln!("warning: {w}");
    }
    let report = execute(&text, command, sweep.as_ref(), format)?;
    match &args.output {
        Some(out) => {
            std::fs::write(out, report).map_err(|e| Error::Io(format!("{}: {e}", out.display())))
        }
        None => {
            print!("{report}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", error_line(&e));
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
