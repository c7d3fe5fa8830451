use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use mgep_core::bench::{builtin, BUILTIN_NAMES};
use mgep_core::experiment::{write_summaries, write_traces};
use mgep_core::{run_experiment, EngineConfig, Mode, RunResult, Summary};

use crate::config::ExperimentConfig;
use crate::error::CliError;

/// Output file opened up front so a bad path fails before any run starts.
struct Output {
    path: PathBuf,
    file: BufWriter<File>,
}

impl Output {
    fn create(path: &Path) -> Result<Output, CliError> {
        let file = File::create(path).map_err(|e| CliError::io(path, e))?;
        Ok(Output { path: path.to_path_buf(), file: BufWriter::new(file) })
    }

    fn write_with(mut self, f: impl FnOnce(&mut BufWriter<File>) -> io::Result<()>) -> Result<(), CliError> {
        f(&mut self.file).and_then(|_| self.file.flush()).map_err(|e| CliError::io(&self.path, e))
    }
}

fn open(path: Option<&PathBuf>) -> Result<Option<Output>, CliError> {
    path.map(|p| Output::create(p)).transpose()
}

fn stdout_summary(summaries: &[Summary]) -> Result<(), CliError> {
    write_summaries(&mut io::stdout().lock(), summaries).map_err(|e| CliError::io(Path::new("<stdout>"), e))
}

/// Runs one experiment and writes its trace and summary.
pub fn run(cfg: &ExperimentConfig) -> Result<(Summary, Vec<RunResult>), CliError> {
    let trace_out = open(cfg.trace.as_ref())?;
    let summary_out = open(cfg.summary.as_ref())?;
    let runs = run_experiment(&cfg.problem, &cfg.engine, cfg.runs, cfg.base_seed)?;
    let summary = Summary::from_runs(&cfg.problem, cfg.engine.mode, &runs, cfg.tolerance);
    if let Some(out) = trace_out {
        out.write_with(|w| write_traces(w, &runs))?;
    }
    match summary_out {
        Some(out) => out.write_with(|w| write_summaries(w, std::slice::from_ref(&summary)))?,
        None => stdout_summary(std::slice::from_ref(&summary))?,
    }
    Ok((summary, runs))
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub engine: EngineConfig,
    pub runs: usize,
    pub base_seed: u64,
    pub tolerance: f64,
    pub summary: Option<PathBuf>,
    /// Directory receiving one `<problem>.csv` trace per benchmark.
    pub trace_dir: Option<PathBuf>,
}

/// Runs every builtin benchmark at its default dimension.
pub fn bench(cfg: &BenchConfig) -> Result<Vec<Summary>, CliError> {
    let summary_out = open(cfg.summary.as_ref())?;
    if let Some(dir) = &cfg.trace_dir {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    let mut summaries = Vec::with_capacity(BUILTIN_NAMES.len());
    for name in BUILTIN_NAMES {
        let problem = builtin(name, None)?;
        let trace_out = open(cfg.trace_dir.as_ref().map(|d| d.join(format!("{name}.csv"))).as_ref())?;
        let runs = run_experiment(&problem, &cfg.engine, cfg.runs, cfg.base_seed)?;
        let s = Summary::from_runs(&problem, cfg.engine.mode, &runs, cfg.tolerance);
        eprintln!("{name}: best {} success {:.2}", s.best, s.success_rate);
        if let Some(out) = trace_out {
            out.write_with(|w| write_traces(w, &runs))?;
        }
        summaries.push(s);
    }
    match summary_out {
        Some(out) => out.write_with(|w| write_summaries(w, &summaries))?,
        None => stdout_summary(&summaries)?,
    }
    Ok(summaries)
}

pub fn parse_mode(s: &str) -> Result<Mode, CliError> {
    s.parse().map_err(|_| CliError::Config(format!("--mode: expected `adaptive` or `baseline`, got `{s}`")))
}
