//! Experiment configuration: defaults, an optional TOML file, then flags.
//!
//! Every key of the file is optional and unknown keys are rejected:
//!
//! ```toml
//! problem = "f8"
//! dim = 2
//! pop_size = 100
//! generations = 1000
//! runs = 50
//! seed = 0
//! mode = "adaptive"          # or "baseline"
//! tolerance = 1e-6           # success tolerance for the summary
//! trace = "trace.csv"
//! summary = "summary.csv"
//!
//! ordinary_head_len = 6
//! homeotic_head_len = 4
//! ordinary_genes = 2
//! constant_set_size = 10
//! mutations_per_individual = 2
//! termination_tolerance = 1e-12
//! enforce_bounds = true
//! ```

use std::fmt;
use std::ops::Range;
use std::path::{Path, PathBuf};

use mgep_core::bench::{builtin, Problem};
use mgep_core::experiment::SUCCESS_TOLERANCE;
use mgep_core::{EngineConfig, Mode};
use serde::Deserialize;
use toml::Spanned;

use crate::error::CliError;

pub const DEFAULT_RUNS: usize = 50;
pub const DEFAULT_SEED: u64 = 0;

/// Everything needed to run one experiment.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub problem: Problem,
    pub engine: EngineConfig,
    pub runs: usize,
    pub base_seed: u64,
    /// Success tolerance used by the summary.
    pub tolerance: f64,
    pub trace: Option<PathBuf>,
    pub summary: Option<PathBuf>,
}

/// Values given on the command line; `None` means "not given".
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub problem: Option<String>,
    pub dim: Option<usize>,
    pub pop_size: Option<usize>,
    pub generations: Option<usize>,
    pub runs: Option<usize>,
    pub seed: Option<u64>,
    pub mode: Option<String>,
    pub tolerance: Option<f64>,
    pub trace: Option<PathBuf>,
    pub summary: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    problem: Option<Spanned<String>>,
    dim: Option<Spanned<usize>>,
    pop_size: Option<Spanned<usize>>,
    generations: Option<Spanned<usize>>,
    runs: Option<Spanned<usize>>,
    seed: Option<Spanned<u64>>,
    mode: Option<Spanned<String>>,
    tolerance: Option<Spanned<f64>>,
    trace: Option<Spanned<PathBuf>>,
    summary: Option<Spanned<PathBuf>>,
    ordinary_head_len: Option<Spanned<usize>>,
    homeotic_head_len: Option<Spanned<usize>>,
    ordinary_genes: Option<Spanned<usize>>,
    constant_set_size: Option<Spanned<usize>>,
    mutations_per_individual: Option<Spanned<usize>>,
    termination_tolerance: Option<Spanned<f64>>,
    enforce_bounds: Option<Spanned<bool>>,
}

/// A parsed config file together with the text it came from.
#[derive(Debug, Default)]
pub struct Source {
    path: PathBuf,
    text: String,
    file: ConfigFile,
}

impl Source {
    pub fn parse(path: &Path, text: String) -> Result<Source, CliError> {
        let file: ConfigFile = toml::from_str(&text).map_err(|e| {
            let at = e.span().map(|s| Location::of(&text, s.start)).unwrap_or_default();
            CliError::Config(format!("{}:{at}: {}", path.display(), e.message()))
        })?;
        Ok(Source { path: path.to_path_buf(), text, file })
    }

    pub fn load(path: &Path) -> Result<Source, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::io(path, source))?;
        Source::parse(path, text)
    }
}

/// 1-based line and column.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Location {
    pub line: usize,
    pub column: usize,
}

impl Default for Location {
    fn default() -> Self {
        Location { line: 1, column: 1 }
    }
}

impl Location {
    pub fn of(text: &str, offset: usize) -> Location {
        let before = &text[..offset.min(text.len())];
        let line = before.matches('\n').count() + 1;
        let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        Location { line, column }
    }
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

/// Where a setting came from, for error messages.
#[derive(Debug, Clone)]
enum Origin {
    Default,
    Flag(&'static str),
    File(PathBuf, Location),
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Origin::Default => write!(f, "default"),
            Origin::Flag(flag) => write!(f, "--{flag}"),
            Origin::File(path, at) => write!(f, "{}:{at}", path.display()),
        }
    }
}

struct Setting<T> {
    value: T,
    origin: Origin,
}

impl<T> Setting<T> {
    fn check(&self, ok: impl FnOnce(&T) -> bool, what: &str) -> Result<(), CliError> {
        if ok(&self.value) {
            Ok(())
        } else {
            Err(CliError::Config(format!("{}: {what}", self.origin)))
        }
    }
}

struct Resolver<'a> {
    source: &'a Source,
}

impl Resolver<'_> {
    fn location(&self, span: Range<usize>) -> Origin {
        Origin::File(self.source.path.clone(), Location::of(&self.source.text, span.start))
    }

    fn pick<T: Clone>(
        &self,
        flag: Option<T>,
        name: &'static str,
        file: &Option<Spanned<T>>,
    ) -> Option<Setting<T>> {
        match (flag, file) {
            (Some(value), _) => Some(Setting { value, origin: Origin::Flag(name) }),
            (None, Some(s)) => Some(Setting { value: s.get_ref().clone(), origin: self.location(s.span()) }),
            (None, None) => None,
        }
    }

    fn or<T: Clone>(
        &self,
        flag: Option<T>,
        name: &'static str,
        file: &Option<Spanned<T>>,
        default: T,
    ) -> Setting<T> {
        self.pick(flag, name, file).unwrap_or(Setting { value: default, origin: Origin::Default })
    }
}

/// Merges defaults, the optional config file and command-line overrides.
pub fn parse_config(flags: Overrides, source: Option<&Source>) -> Result<ExperimentConfig, CliError> {
    let empty = Source::default();
    let r = Resolver { source: source.unwrap_or(&empty) };
    let f = &r.source.file;
    let base = EngineConfig::default();

    let problem = r
        .pick(flags.problem, "problem", &f.problem)
        .ok_or_else(|| CliError::Config("missing problem (use --problem or `problem = ...`)".into()))?;
    let dim = r.pick(flags.dim, "dim", &f.dim);
    let pop_size = r.or(flags.pop_size, "pop-size", &f.pop_size, base.pop_size);
    let generations = r.or(flags.generations, "generations", &f.generations, base.max_gen);
    let runs = r.or(flags.runs, "runs", &f.runs, DEFAULT_RUNS);
    let seed = r.or(flags.seed, "seed", &f.seed, DEFAULT_SEED);
    let mode = r.or(flags.mode, "mode", &f.mode, base.mode.to_string());
    let tolerance = r.or(flags.tolerance, "tolerance", &f.tolerance, SUCCESS_TOLERANCE);
    let ordinary_head_len = r.or(None, "", &f.ordinary_head_len, base.ordinary_head_len);
    let homeotic_head_len = r.or(None, "", &f.homeotic_head_len, base.homeotic_head_len);
    let ordinary_genes = r.or(None, "", &f.ordinary_genes, base.n_ordinary);
    let constant_set_size = r.or(None, "", &f.constant_set_size, base.constant_set_size);
    let mutations = r.or(None, "", &f.mutations_per_individual, base.mutations_per_individual);
    let termination = r.or(None, "", &f.termination_tolerance, base.termination_tolerance);
    let enforce_bounds = r.or(None, "", &f.enforce_bounds, base.enforce_bounds);

    dim.as_ref().map_or(Ok(()), |d| d.check(|&d| d >= 1, "dimension must be at least 1"))?;
    pop_size.check(|&n| n >= 2, "population size must be at least 2")?;
    generations.check(|&g| g >= 1, "generations must be at least 1")?;
    runs.check(|&n| n >= 1, "runs must be at least 1")?;
    tolerance.check(|t| t.is_finite() && *t >= 0.0, "tolerance must be a non-negative number")?;
    ordinary_head_len.check(|&h| h >= 1, "ordinary_head_len must be at least 1")?;
    homeotic_head_len.check(|&h| h >= 1, "homeotic_head_len must be at least 1")?;
    ordinary_genes.check(|&n| (1..=256).contains(&n), "ordinary_genes must be in 1..=256")?;
    constant_set_size.check(|&n| n <= 26, "constant_set_size must be at most 26")?;
    mutations.check(|&k| k >= 1, "mutations_per_individual must be at least 1")?;
    termination
        .check(|t| t.is_finite() && *t >= 0.0, "termination_tolerance must be a non-negative number")?;

    let parsed_mode: Mode = mode.value.parse().map_err(|_| {
        CliError::Config(format!(
            "{}: mode must be `adaptive` or `baseline`, got `{}`",
            mode.origin, mode.value
        ))
    })?;
    let problem = builtin(&problem.value, dim.as_ref().map(|d| d.value)).map_err(|e| {
        let origin = dim.as_ref().map_or(&problem.origin, |d| &d.origin);
        CliError::Config(format!("{origin}: {e}"))
    })?;
    let engine = EngineConfig {
        pop_size: pop_size.value,
        max_gen: generations.value,
        mode: parsed_mode,
        ordinary_head_len: ordinary_head_len.value,
        homeotic_head_len: homeotic_head_len.value,
        n_ordinary: ordinary_genes.value,
        constant_set_size: constant_set_size.value,
        mutations_per_individual: mutations.value,
        termination_tolerance: termination.value,
        enforce_bounds: enforce_bounds.value,
        ..base
    };
    engine.validate().map_err(|e| CliError::Config(e.to_string()))?;
    Ok(ExperimentConfig {
        problem,
        engine,
        runs: runs.value,
        base_seed: seed.value,
        tolerance: tolerance.value,
        trace: r.pick(flags.trace, "trace", &f.trace).map(|s| s.value),
        summary: r.pick(flags.summary, "summary", &f.summary).map(|s| s.value),
    })
}
