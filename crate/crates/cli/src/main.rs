use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use mgep_cli::commands::{self, BenchConfig};
use mgep_cli::config::{DEFAULT_RUNS, DEFAULT_SEED};
use mgep_cli::{parse_config, CliError, Overrides, Source};
use mgep_core::experiment::SUCCESS_TOLERANCE;
use mgep_core::EngineConfig;

/// Fuzzy-adaptive multicellular GEP optimizer.
#[derive(Debug, Parser)]
#[command(name = "mgep", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run repeated independent runs of one benchmark.
    Run(RunArgs),
    /// Run every benchmark with default settings.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Benchmark name, f1..f12.
    #[arg(long)]
    problem: Option<String>,
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long)]
    pop_size: Option<usize>,
    /// Maximum number of generations per run.
    #[arg(long)]
    generations: Option<usize>,
    #[arg(long)]
    runs: Option<usize>,
    /// Base seed; run i uses seed + i.
    #[arg(long)]
    seed: Option<u64>,
    /// adaptive or baseline.
    #[arg(long)]
    mode: Option<String>,
    /// Success tolerance around the known optimum.
    #[arg(long)]
    tolerance: Option<f64>,
    /// Per-generation trace CSV.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Summary CSV; printed to stdout when omitted.
    #[arg(long)]
    summary: Option<PathBuf>,
    /// TOML file with defaults for any of the above.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct BenchArgs {
    #[arg(long, default_value_t = DEFAULT_RUNS)]
    runs: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, default_value = "adaptive")]
    mode: String,
    #[arg(long)]
    generations: Option<usize>,
    #[arg(long, default_value_t = SUCCESS_TOLERANCE)]
    tolerance: f64,
    #[arg(long)]
    summary: Option<PathBuf>,
    /// Directory for one trace CSV per benchmark.
    #[arg(long)]
    trace_dir: Option<PathBuf>,
}

fn run(args: RunArgs) -> Result<(), CliError> {
    let source = args.config.as_deref().map(Source::load).transpose()?;
    let overrides = Overrides {
        problem: args.problem,
        dim: args.dim,
        pop_size: args.pop_size,
        generations: args.generations,
        runs: args.runs,
        seed: args.seed,
        mode: args.mode,
        tolerance: args.tolerance,
        trace: args.trace,
        summary: args.summary,
    };
    let cfg = parse_config(overrides, source.as_ref())?;
    commands::run(&cfg)?;
    Ok(())
}

fn bench(args: BenchArgs) -> Result<(), CliError> {
    let mut engine = EngineConfig { mode: commands::parse_mode(&args.mode)?, ..EngineConfig::default() };
    if let Some(g) = args.generations {
        engine.max_gen = g;
    }
    engine.validate()?;
    if args.runs == 0 {
        return Err(CliError::Config("--runs: runs must be at least 1".into()));
    }
    if !(args.tolerance.is_finite() && args.tolerance >= 0.0) {
        return Err(CliError::Config("--tolerance: tolerance must be a non-negative number".into()));
    }
    let cfg = BenchConfig {
        engine,
        runs: args.runs,
        base_seed: args.seed,
        tolerance: args.tolerance,
        summary: args.summary,
        trace_dir: args.trace_dir,
    };
    commands::bench(&cfg)?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    let result = match cli.command {
        Command::Run(args) => run(args),
        Command::Bench(args) => bench(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
