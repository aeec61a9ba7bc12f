//! `glspace <command> --config <file> [--out <path>] [--format csv|json] [--seed N]`

mod commands;
mod config;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use crate::commands::RunError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Norm,
    Fundamental,
    Boyd,
    Dual,
    OperatorCheck,
    Acn,
    AmTest,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Self::Norm => "norm",
            Self::Fundamental => "fundamental",
            Self::Boyd => "boyd",
            Self::Dual => "dual",
            Self::OperatorCheck => "operator-check",
            Self::Acn => "acn",
            Self::AmTest => "am-test",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

/// Composed and integral grand Lebesgue space diagnostics.
#[derive(Debug, Parser)]
#[command(name = "glspace", version)]
struct Cli {
    command: Command,
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Report path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Overrides the config seed.
    #[arg(long)]
    seed: Option<u64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match execute(&cli) {
        Ok(pass) => u8::from(!pass),
        Err(e) => {
            eprintln!("glspace {}: {e}", cli.command.name());
            if let RunError::Numeric {
                record: Some(rec), ..
            } = &e
            {
                eprintln!("{}", serde_json::to_string(rec).unwrap_or_default());
            }
            e.exit_code() as u8
        }
    };
    ExitCode::from(code)
}

fn execute(cli: &Cli) -> Result<bool, RunError> {
    let config = config::load_config(&cli.config, cli.command, cli.seed)?;
    let report = commands::run(&config, cli.command)?;
    let text = match cli.format {
        Format::Csv => report.to_csv(&config),
        Format::Json => report.to_json(&config),
    };
    match &cli.out {
        Some(path) => std::fs::write(path, text).map_err(|e| {
            RunError::Config(config::ConfigError::at("--out", format!("cannot write {}: {e}", path.display())))
        })?,
        None => print!("{text}"),
    }
    let verdict = if report.pass { "pass" } else { "FAIL" };
    eprintln!("glspace {} [seed {}]: {verdict}; {}", cli.command.name(), config.seed, report.summary);
    Ok(report.pass)
}
