use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, ValueEnum};
use wtp_core::cli::{parse_config, run, Command};

const BUDGET_VAR: &str = "WTP_BUDGET";

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CommandArg {
    Entropy,
    Dimension,
    Estimate,
    Variational,
    Check,
}

impl From<CommandArg> for Command {
    fn from(c: CommandArg) -> Self {
        match c {
            CommandArg::Entropy => Command::Entropy,
            CommandArg::Dimension => Command::Dimension,
            CommandArg::Estimate => Command::Estimate,
            CommandArg::Variational => Command::Variational,
            CommandArg::Check => Command::Check,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Table,
}

/// Weighted topological entropy, pressure and dimension of symbolic chains.
///
/// Exit status: 0 success, 1 invalid input, 2 computation error, 3 a check failed.
/// The enumeration budget can be overridden with WTP_BUDGET.
#[derive(Debug, Parser)]
#[command(name = "wtp", version)]
struct Args {
    command: CommandArg,
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Largest word length for the estimator.
    #[arg(long)]
    n_max: Option<usize>,
    /// Worker threads for the estimator (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

enum Failure {
    Input(anyhow::Error),
    Computation(anyhow::Error),
}

impl Failure {
    fn classify(e: anyhow::Error) -> Self {
        match e.downcast_ref::<wtp_core::Error>() {
            Some(core) if !core.is_validation() => Failure::Computation(e),
            _ => Failure::Input(e),
        }
    }
}

fn budget_override() -> Result<Option<u64>> {
    let Ok(raw) = std::env::var(BUDGET_VAR) else {
        return Ok(None);
    };
    let raw = raw.trim();
    if let Ok(b) = raw.parse::<u64>() {
        return Ok(Some(b));
    }
    match raw.parse::<f64>() {
        Ok(x) if x >= 0.0 && x.fract() == 0.0 && x <= u64::MAX as f64 => Ok(Some(x as u64)),
        _ => anyhow::bail!("{BUDGET_VAR}={raw:?} is not a nonnegative integer"),
    }
}

fn execute(args: &Args) -> std::result::Result<ExitCode, Failure> {
    if let Some(t) = args.threads {
        if t == 0 {
            return Err(Failure::Input(anyhow::anyhow!("--threads must be at least 1")));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .context("configuring the thread pool")
            .map_err(Failure::Computation)?;
    }
    let path = args.config.display().to_string();
    let text = std::fs::read_to_string(&args.config)
        .with_context(|| format!("reading {path}"))
        .map_err(Failure::Input)?;
    let mut cfg = parse_config(&text, &path)
        .with_context(|| format!("invalid configuration {path}"))
        .map_err(Failure::classify)?;
    if let Some(n) = args.n_max {
        cfg = cfg.with_n_max(n).context("--n-max").map_err(Failure::Input)?;
    }
    if let Some(b) = budget_override().map_err(Failure::Input)? {
        cfg = cfg.with_budget(b);
    }
    let command = Command::from(args.command);
    let report = run(&cfg, command)
        .with_context(|| format!("{command} failed"))
        .map_err(Failure::classify)?;
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    match args.format {
        Format::Json => println!("{}", report.to_json()),
        Format::Table => print!("{}", report.to_table()),
    }
    if report.all_checks_passed() {
        Ok(ExitCode::SUCCESS)
    } else {
        for c in report.checks.iter().filter(|c| !c.passed) {
            eprintln!("check failed: {}: {}", c.name, c.detail);
        }
        Ok(ExitCode::from(3))
    }
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match execute(&args) {
        Ok(code) => code,
        Err(Failure::Input(e)) => {
            eprintln!("wtp: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Computation(e)) => {
            eprintln!("wtp: {e:#}");
            ExitCode::from(2)
        }
    }
}
