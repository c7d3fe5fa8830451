//! WebAssembly bindings for the static demo page in `www/`.
//!
//! Three operations are exposed: sampling the fuzzy rate controllers, running
//! the engine on a benchmark, and decoding a random chromosome into formulas.

use mgep_core::bench::builtin;
use mgep_core::decode::{build_tree, eval_chromosome, expressed_len};
use mgep_core::evolve::EngineRng;
use mgep_core::fuzzy::RateControllers;
use mgep_core::genome::Chromosome;
use mgep_core::{Engine, EngineConfig, Mode, RunResult};
use rand::SeedableRng;
use wasm_bindgen::prelude::*;

/// Column order of [`Evolution::trace`].
pub const TRACE_COLUMNS: [&str; 7] = ["generation", "best", "average", "diversity", "p_c", "p_m", "r_c"];

/// `[d, p_c, p_m]` triples for `n` evenly spaced diversity readings in `[0.6, 1]`.
#[wasm_bindgen]
pub fn rate_curves(n: usize) -> Vec<f64> {
    let c = RateControllers::new(1000);
    let n = n.max(2);
    (0..n)
        .flat_map(|i| {
            let d = 0.6 + 0.4 * i as f64 / (n - 1) as f64;
            [d, c.crossover.infer(d), c.mutation.infer(d)]
        })
        .collect()
}

/// Constant-set mutation rate on an `n × n` grid, rows by generation over
/// `[max_gen/2, max_gen]`, columns by diversity over `[0.6, 1]`.
#[wasm_bindgen]
pub fn constant_rate_surface(n: usize, max_gen: usize) -> Vec<f64> {
    let c = RateControllers::new(max_gen.max(2));
    let n = n.max(2);
    let half = max_gen as f64 / 2.0;
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        let g = half + half * i as f64 / (n - 1) as f64;
        for j in 0..n {
            out.push(c.constants.infer(g, 0.6 + 0.4 * j as f64 / (n - 1) as f64));
        }
    }
    out
}

/// A finished run.
#[wasm_bindgen]
pub struct Evolution {
    result: RunResult,
}

impl Evolution {
    pub fn start(
        problem: &str,
        pop_size: usize,
        generations: usize,
        seed: u64,
        adaptive: bool,
    ) -> Result<Self, String> {
        let problem = builtin(problem, None).map_err(|e| e.to_string())?;
        let mode = if adaptive { Mode::Adaptive } else { Mode::Baseline };
        let cfg = EngineConfig { pop_size, max_gen: generations, mode, ..EngineConfig::default() };
        let engine = Engine::new(problem, cfg).map_err(|e| e.to_string())?;
        Ok(Evolution { result: engine.run(seed) })
    }

    pub fn result(&self) -> &RunResult {
        &self.result
    }
}

#[wasm_bindgen]
impl Evolution {
    #[wasm_bindgen(constructor)]
    pub fn new(
        problem: &str,
        pop_size: usize,
        generations: usize,
        seed: u64,
        adaptive: bool,
    ) -> Result<Evolution, JsError> {
        Evolution::start(problem, pop_size, generations, seed, adaptive).map_err(|e| JsError::new(&e))
    }

    /// Row-major trace, one row of [`TRACE_COLUMNS`] per generation.
    pub fn trace(&self) -> Vec<f64> {
        self.result
            .trace
            .iter()
            .flat_map(|r| {
                [
                    r.generation as f64,
                    r.best_fitness,
                    r.avg_fitness,
                    r.diversity,
                    r.rates.crossover,
                    r.rates.mutation,
                    r.rates.constants,
                ]
            })
            .collect()
    }

    #[wasm_bindgen(getter)]
    pub fn generations(&self) -> usize {
        self.result.trace.len()
    }

    #[wasm_bindgen(getter, js_name = bestFitness)]
    pub fn best_fitness(&self) -> f64 {
        self.result.best.fitness
    }

    #[wasm_bindgen(getter, js_name = bestGeneration)]
    pub fn best_generation(&self) -> usize {
        self.result.best_generation
    }

    #[wasm_bindgen(js_name = bestPoint)]
    pub fn best_point(&self) -> Vec<f64> {
        self.result.best.point.clone()
    }

    /// Formulas of the best chromosome, one line per gene.
    #[wasm_bindgen(js_name = bestFormulas)]
    pub fn best_formulas(&self) -> String {
        describe(&self.result.best.chromosome, None)
    }
}

fn describe(c: &Chromosome, values: Option<&[f64]>) -> String {
    let mut lines = Vec::new();
    for (i, g) in c.ordinary.iter().enumerate() {
        let karva: String = (0..expressed_len(g)).map(|k| g.symbol(k).to_string()).collect();
        lines.push(format!("g{i} = {}    [{karva}]", build_tree(g)));
    }
    for (i, h) in c.homeotic.iter().enumerate() {
        let value = values.map(|v| format!("  = {:.6}", v[i])).unwrap_or_default();
        lines.push(format!("x{} = {}{value}", i + 1, build_tree(h)));
    }
    lines.join("\n")
}

/// Chromosome string, decoded gene formulas and resulting point for a random
/// chromosome of the given benchmark's encoding.
#[wasm_bindgen(js_name = decodeRandom)]
pub fn decode_random(problem: &str, seed: u64) -> Result<String, JsError> {
    decode_random_text(problem, seed).map_err(|e| JsError::new(&e))
}

pub fn decode_random_text(problem: &str, seed: u64) -> Result<String, String> {
    let p = builtin(problem, None).map_err(|e| e.to_string())?;
    let dim = p.dim;
    let engine = Engine::new(p, EngineConfig::default()).map_err(|e| e.to_string())?;
    let mut rng = EngineRng::seed_from_u64(seed);
    let constants = engine.random_constants(&mut rng);
    let c = engine.encoding().random_chromosome(&mut rng);
    let point = eval_chromosome(&c, &constants);
    let shown = dim.min(8);
    let mut chromosome = c.to_string();
    if dim > shown {
        chromosome =
            chromosome.lines().take(c.ordinary.len() + shown).collect::<Vec<_>>().join("\n") + "\n...";
    }
    let mut text = format!("{chromosome}\n\n");
    let constants_line: Vec<String> = constants.values.iter().map(|v| format!("{v:.4}")).collect();
    text += &format!("constants = [{}]\n\n", constants_line.join(", "));
    let mut trimmed = c.clone();
    trimmed.homeotic.truncate(shown);
    text += &describe(&trimmed, Some(&point));
    if dim > shown {
        text += &format!("\n... {} more dimensions", dim - shown);
    }
    text += &format!("\n\nf(x) = {}", engine.fitness(&point));
    Ok(text)
}
