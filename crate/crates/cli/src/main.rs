use std::process::ExitCode;

use burstsync_cli::args::Cli;
use burstsync_cli::{run, CliError};
use clap::Parser;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn execute(cli: &Cli) -> Result<(), CliError> {
    let cfg = cli.resolve()?;
    if cli.dump_config {
        print!("{}", cfg.to_toml_string()?);
        return Ok(());
    }
    let report = run(&cfg)?;
    let csv = report.csv()?;
    match &cfg.output {
        Some(path) => std::fs::write(path, csv)?,
        None => print!("{csv}"),
    }
    eprintln!("{}", report.summary);
    Ok(())
}
