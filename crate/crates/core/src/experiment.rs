//! Multi-run experiments, summary statistics and CSV emission.

use std::io::{self, Write};

use crate::bench::Problem;
use crate::error::Result;
use crate::evolve::{Engine, EngineConfig, Mode, RunResult, TraceRow};

pub const TRACE_HEADER: &str =
    "run,generation,best_fitness,avg_fitness,diversity_d,p_c,p_m,r_c,constant_reset";
pub const SUMMARY_HEADER: &str =
    "problem,dim,mode,runs,best,mean_best,variance,success_rate,mean_gens_to_best";

/// Default reporting tolerance for success statistics.
pub const SUCCESS_TOLERANCE: f64 = 1e-6;

/// Runs `runs` independent runs; run `i` uses seed `base_seed + i`.
pub fn run_experiment(
    problem: &Problem,
    cfg: &EngineConfig,
    runs: usize,
    base_seed: u64,
) -> Result<Vec<RunResult>> {
    let engine = Engine::new(problem.clone(), cfg.clone())?;
    let seeds: Vec<u64> = (0..runs as u64).map(|i| base_seed.wrapping_add(i)).collect();
    #[cfg(feature = "parallel")]
    let results = {
        use rayon::prelude::*;
        seeds.par_iter().map(|&s| engine.run(s)).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let results = seeds.iter().map(|&s| engine.run(s)).collect();
    Ok(results)
}

/// Statistics over the best values of a set of runs, computed from traces only.
#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub problem: String,
    pub dim: usize,
    pub mode: Mode,
    pub runs: usize,
    pub best: f64,
    pub mean_best: f64,
    /// Population variance of the per-run bests.
    pub variance: f64,
    pub success_rate: f64,
    /// Mean generation of first reaching the final best, over successful runs.
    pub mean_gens_to_best: Option<f64>,
}

/// Final best and the generation it was first reached.
pub fn trace_outcome(trace: &[TraceRow]) -> Option<(f64, usize)> {
    let last = trace.last()?.best_fitness;
    let gen = trace.iter().find(|r| r.best_fitness.to_bits() == last.to_bits())?.generation;
    Some((last, gen))
}

impl Summary {
    pub fn from_traces<'a>(
        problem: &Problem,
        mode: Mode,
        traces: impl IntoIterator<Item = &'a [TraceRow]>,
        tolerance: f64,
    ) -> Summary {
        let outcomes: Vec<(f64, usize)> = traces.into_iter().filter_map(trace_outcome).collect();
        let dir = problem.direction;
        let n = outcomes.len() as f64;
        let best = outcomes.iter().map(|o| o.0).fold(f64::NAN, |acc, f| {
            if acc.is_nan() || dir.better(f, acc) {
                f
            } else {
                acc
            }
        });
        let mean_best = outcomes.iter().map(|o| o.0).sum::<f64>() / n;
        let variance = outcomes.iter().map(|o| (o.0 - mean_best).powi(2)).sum::<f64>() / n;
        let successes: Vec<usize> = outcomes
            .iter()
            .filter(|(f, _)| problem.known_optimum.is_some_and(|opt| dir.reaches(*f, opt, tolerance)))
            .map(|o| o.1)
            .collect();
        let mean_gens_to_best =
            (!successes.is_empty()).then(|| successes.iter().sum::<usize>() as f64 / successes.len() as f64);
        Summary {
            problem: problem.name.clone(),
            dim: problem.dim,
            mode,
            runs: outcomes.len(),
            best,
            mean_best,
            variance,
            success_rate: successes.len() as f64 / n,
            mean_gens_to_best,
        }
    }

    pub fn from_runs(problem: &Problem, mode: Mode, runs: &[RunResult], tolerance: f64) -> Summary {
        Summary::from_traces(problem, mode, runs.iter().map(|r| r.trace.as_slice()), tolerance)
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.problem,
            self.dim,
            self.mode,
            self.runs,
            fmt_f64(self.best),
            fmt_f64(self.mean_best),
            fmt_f64(self.variance),
            fmt_f64(self.success_rate),
            self.mean_gens_to_best.map_or_else(|| "NaN".to_string(), fmt_f64),
        )
    }
}

/// Shortest round-trip form; scientific notation for very small or large magnitudes.
pub fn fmt_f64(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || !x.is_finite() || (1e-5..1e16).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

pub fn trace_row_csv(run: usize, row: &TraceRow) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{}",
        run,
        row.generation,
        fmt_f64(row.best_fitness),
        fmt_f64(row.avg_fitness),
        fmt_f64(row.diversity),
        fmt_f64(row.rates.crossover),
        fmt_f64(row.rates.mutation),
        fmt_f64(row.rates.constants),
        u8::from(row.constant_reset),
    )
}

/// Writes the trace header and every row of every run, runs in order.
pub fn write_traces<W: Write>(out: &mut W, runs: &[RunResult]) -> io::Result<()> {
    writeln!(out, "{TRACE_HEADER}")?;
    for (i, r) in runs.iter().enumerate() {
        for row in &r.trace {
            writeln!(out, "{}", trace_row_csv(i, row))?;
        }
    }
    Ok(())
}

pub fn write_summaries<W: Write>(out: &mut W, summaries: &[Summary]) -> io::Result<()> {
    writeln!(out, "{SUMMARY_HEADER}")?;
    for s in summaries {
        writeln!(out, "{}", s.csv_row())?;
    }
    Ok(())
}
