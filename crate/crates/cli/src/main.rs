use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use svgd::config::load_config;
use svgd::runner::{run_to_dir, RunPlan, Sampler};
use svgd::theory::TheoryReport;
use svgd::verify::verify;
use svgd::Error;

/// Stein variational gradient descent with certified step sizes.
#[derive(Parser)]
#[command(name = "svgd", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run SVGD and write trace.csv, particle snapshots and report.json.
    Run {
        #[arg(long)]
        config: PathBuf,
    },
    /// Print the theory constants, step size and iteration budget.
    Constants {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Numerically check every bound the step sizes rely on.
    Verify {
        /// Only run checks whose name contains this string.
        #[arg(long)]
        filter: Option<String>,
    },
    /// Run unadjusted Langevin Monte Carlo with the same config and outputs.
    BaselineLmc {
        #[arg(long)]
        config: PathBuf,
    },
}

const EXIT_FAILURE: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_REJECTED: u8 = 3;
const EXIT_VERIFY: u8 = 4;

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Config { .. } | Error::Argument(_) | Error::Dimension { .. } => EXIT_CONFIG,
        Error::NonFinite { .. } => EXIT_REJECTED,
        Error::Io { .. } => EXIT_FAILURE,
    }
}

/// Write to stdout, ignoring a closed pipe.
fn emit(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn configure_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var("THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| format!("THREADS must be a positive integer, got {raw:?}"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| e.to_string())
}

fn run(config: &Path, sampler: Sampler) -> Result<u8, Error> {
    let (cfg, base) = load_config(config)?;
    let plan = RunPlan::from_config(&cfg, &base)?;
    let (outcome, summary) = run_to_dir(&plan, sampler, &cfg.output_dir)?;
    emit(&(serde_json::to_string_pretty(&summary).expect("summary serializes") + "\n"));
    match outcome.rejection {
        Some(err) => {
            eprintln!("error: {err}");
            Ok(EXIT_REJECTED)
        }
        None => Ok(0),
    }
}

fn constants(config: &Path, json: bool) -> Result<u8, Error> {
    let (cfg, base) = load_config(config)?;
    let target = cfg.build_target(&base)?;
    let kernel = cfg.kernel_spec()?;
    let profile = cfg.tp_profile(&target)?;
    let policy = cfg.step_policy();
    let epsilon = policy.epsilon.unwrap_or(svgd::runner::DEFAULT_EPSILON);
    let report = TheoryReport::compute(&target, &kernel, &profile, policy.alpha, epsilon)?;
    if json {
        emit(&(serde_json::to_string_pretty(&report).expect("report serializes") + "\n"));
    } else {
        emit(&report.to_key_values());
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(msg) = configure_threads() {
        eprintln!("error: {msg}");
        return ExitCode::from(EXIT_CONFIG);
    }
    let result = match cli.command {
        Command::Run { config } => run(&config, Sampler::Svgd),
        Command::BaselineLmc { config } => run(&config, Sampler::Lmc),
        Command::Constants { config, json } => constants(&config, json),
        Command::Verify { filter } => {
            let report = verify(filter.as_deref());
            emit(&report.to_text());
            if report.checks.is_empty() {
                eprintln!("error: no check matches the filter");
                Ok(EXIT_CONFIG)
            } else if report.all_passed() {
                Ok(0)
            } else {
                Ok(EXIT_VERIFY)
            }
        }
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}
