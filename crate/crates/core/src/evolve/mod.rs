//! The fuzzy-adaptive multicellular GEP engine.
//!
//! Each generation measures the population's fitness concentration, schedules
//! the crossover, mutation and constant-set mutation rates, possibly
//! regenerates the shared constant set, builds a temporary population from the
//! parents plus four operator pipelines, and selects the next generation by
//! elitism and tournaments.

mod operators;
mod rates;

pub use operators::{crossover, crossover_at, mutate};
pub use rates::{
    adapt_rates, constants_phase, diversity, DiversityReading, Rates, BASELINE_RATES, FIXED_CROSSOVER,
    FIXED_MUTATION,
};

use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bench::Problem;
use crate::decode::eval_chromosome;
use crate::error::{Error, Result};
use crate::fuzzy::RateControllers;
use crate::genome::{random_constant_set, Chromosome, ConstantSet, Encoding, GeneLayout, SymbolSet};

/// Seeded generator used for every run.
pub type EngineRng = ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Fuzzy-controlled rates and the four-pipeline temporary population.
    Adaptive,
    /// Fixed rates, crossover-then-mutation only, tournaments of four.
    Baseline,
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::Adaptive => "adaptive",
            Mode::Baseline => "baseline",
        })
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "adaptive" => Ok(Mode::Adaptive),
            "baseline" => Ok(Mode::Baseline),
            other => Err(Error::config(format!("unknown mode `{other}` (expected adaptive|baseline)"))),
        }
    }
}

/// Tournament size of the baseline mode.
pub const BASELINE_TOURNAMENT: usize = 4;

#[derive(Debug, Clone, PartialEq)]
pub struct EngineConfig {
    pub pop_size: usize,
    pub max_gen: usize,
    pub mode: Mode,
    pub ordinary_head_len: usize,
    pub homeotic_head_len: usize,
    pub n_ordinary: usize,
    pub constant_set_size: usize,
    /// Point mutations applied to an individual selected for mutation.
    pub mutations_per_individual: usize,
    /// Tournament size as a fraction of the temporary population.
    pub tournament_fraction: f64,
    /// Elites as a fraction of the population.
    pub elite_fraction: f64,
    /// A run stops once its best is this close to the known optimum.
    pub termination_tolerance: f64,
    /// Points decoded outside the problem's box get non-finite fitness.
    pub enforce_bounds: bool,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            pop_size: 100,
            max_gen: 1000,
            mode: Mode::Adaptive,
            ordinary_head_len: 6,
            homeotic_head_len: 4,
            n_ordinary: 2,
            constant_set_size: 10,
            mutations_per_individual: 2,
            tournament_fraction: 0.01,
            elite_fraction: 0.01,
            termination_tolerance: 1e-12,
            enforce_bounds: true,
        }
    }
}

impl EngineConfig {
    pub fn validate(&self) -> Result<()> {
        let check = |ok: bool, msg: &str| if ok { Ok(()) } else { Err(Error::config(msg)) };
        check(self.pop_size >= 2, "pop_size must be at least 2")?;
        check(self.max_gen >= 1, "max_gen must be at least 1")?;
        check(self.ordinary_head_len >= 1, "ordinary_head_len must be positive")?;
        check(self.homeotic_head_len >= 1, "homeotic_head_len must be positive")?;
        check(self.n_ordinary >= 1, "n_ordinary must be positive")?;
        check(self.mutations_per_individual >= 1, "mutations_per_individual must be positive")?;
        check((0.0..=1.0).contains(&self.tournament_fraction), "tournament_fraction must be in [0, 1]")?;
        check((0.0..=1.0).contains(&self.elite_fraction), "elite_fraction must be in [0, 1]")?;
        check(self.termination_tolerance >= 0.0, "termination_tolerance must be non-negative")?;
        Ok(())
    }

    /// Size of the temporary population built each generation.
    pub fn temp_size(&self) -> usize {
        match self.mode {
            Mode::Adaptive => 5 * self.pop_size,
            Mode::Baseline => 2 * self.pop_size,
        }
    }

    pub fn tournament_size(&self, temp_len: usize) -> usize {
        let size = match self.mode {
            Mode::Adaptive => ((self.tournament_fraction * temp_len as f64).round() as usize).max(2),
            Mode::Baseline => BASELINE_TOURNAMENT,
        };
        size.min(temp_len).max(1)
    }

    pub fn elite_count(&self) -> usize {
        ((self.elite_fraction * self.pop_size as f64).round() as usize).clamp(1, self.pop_size)
    }
}

/// A chromosome with its decoded point and objective value (NaN when the
/// point is infeasible).
#[derive(Debug, Clone, PartialEq)]
pub struct Individual {
    pub chromosome: Chromosome,
    pub point: Vec<f64>,
    pub fitness: f64,
}

/// One generation of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow {
    pub generation: usize,
    /// Best fitness found so far in the run.
    pub best_fitness: f64,
    /// Mean finite fitness of the population entering this generation.
    pub avg_fitness: f64,
    pub diversity: f64,
    pub rates: Rates,
    pub constant_reset: bool,
    /// Size of the temporary population built this generation (0 on the final row).
    pub temp_size: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub seed: u64,
    /// Best individual found, with the point and fitness it had when found.
    pub best: Individual,
    /// Generation at which `best` was first reached.
    pub best_generation: usize,
    /// One row per generation `0..=last`.
    pub trace: Vec<TraceRow>,
    /// Whether the run stopped on reaching the known optimum.
    pub hit_optimum: bool,
}

impl RunResult {
    pub fn generations(&self) -> usize {
        self.trace.len()
    }
}

/// Offspring bookkeeping: `source` names the parent it is an exact copy of.
struct Offspring {
    chromosome: Chromosome,
    source: Option<usize>,
}

pub struct Engine {
    problem: Problem,
    cfg: EngineConfig,
    encoding: Encoding,
    controllers: RateControllers,
}

impl Engine {
    pub fn new(problem: Problem, cfg: EngineConfig) -> Result<Self> {
        cfg.validate()?;
        let (lo, hi) = problem.domain();
        if problem.dim == 0 || problem.bounds.len() != problem.dim || lo.is_nan() || hi.is_nan() || lo >= hi {
            return Err(Error::config(format!("problem {} has an invalid domain", problem.name)));
        }
        let symbols = SymbolSet::new(&problem.extra_operators, cfg.constant_set_size)?;
        let layout = GeneLayout::new(
            cfg.ordinary_head_len,
            cfg.homeotic_head_len,
            cfg.n_ordinary,
            problem.dim,
            symbols.max_arity(),
        )?;
        let encoding = Encoding::new(layout, symbols)?;
        let controllers = RateControllers::new(cfg.max_gen);
        Ok(Engine { problem, cfg, encoding, controllers })
    }

    pub fn problem(&self) -> &Problem {
        &self.problem
    }

    pub fn config(&self) -> &EngineConfig {
        &self.cfg
    }

    pub fn encoding(&self) -> &Encoding {
        &self.encoding
    }

    pub fn controllers(&self) -> &RateControllers {
        &self.controllers
    }

    pub fn evaluate(&self, chromosome: Chromosome, constants: &ConstantSet) -> Individual {
        let point = eval_chromosome(&chromosome, constants);
        let fitness = self.fitness(&point);
        Individual { chromosome, point, fitness }
    }

    /// Objective value, or NaN for a point outside the box when bounds are enforced.
    pub fn fitness(&self, point: &[f64]) -> f64 {
        let inside = || point.iter().zip(&self.problem.bounds).all(|(x, &(lo, hi))| (lo..=hi).contains(x));
        if self.cfg.enforce_bounds && !inside() {
            f64::NAN
        } else {
            self.problem.evaluate(point)
        }
    }

    pub fn random_constants(&self, rng: &mut EngineRng) -> ConstantSet {
        let (lo, hi) = self.problem.domain();
        random_constant_set(self.cfg.constant_set_size, lo, hi, rng).expect("domain checked in Engine::new")
    }

    pub fn initial_population(&self, constants: &ConstantSet, rng: &mut EngineRng) -> Vec<Individual> {
        (0..self.cfg.pop_size)
            .map(|_| self.evaluate(self.encoding.random_chromosome(rng), constants))
            .collect()
    }

    fn crossover_batch(&self, parents: &[Offspring], rate: f64, rng: &mut EngineRng) -> Vec<Offspring> {
        let mut order: Vec<usize> = (0..parents.len()).collect();
        order.shuffle(rng);
        let mut out = Vec::with_capacity(parents.len());
        for pair in order.chunks(2) {
            match *pair {
                [i, j] => {
                    let (a, b) = (&parents[i], &parents[j]);
                    let (x, y, applied) = crossover(&a.chromosome, &b.chromosome, rate, rng);
                    let (sx, sy) = if applied { (None, None) } else { (a.source, b.source) };
                    out.push(Offspring { chromosome: x, source: sx });
                    out.push(Offspring { chromosome: y, source: sy });
                }
                [i] => out
                    .push(Offspring { chromosome: parents[i].chromosome.clone(), source: parents[i].source }),
                _ => unreachable!(),
            }
        }
        out
    }

    fn mutation_batch(&self, parents: &[Offspring], rate: f64, rng: &mut EngineRng) -> Vec<Offspring> {
        let k = self.cfg.mutations_per_individual;
        parents
            .iter()
            .map(|p| {
                let (chromosome, changed) = mutate(&p.chromosome, &self.encoding, rate, k, rng);
                Offspring { chromosome, source: if changed { None } else { p.source } }
            })
            .collect()
    }

    /// Parents plus the offspring of the operator pipelines, all evaluated.
    ///
    /// Adaptive mode runs crossover-only, mutation-only, crossover-then-mutation
    /// and mutation-then-crossover, each over the whole parent population, for
    /// `5N` individuals. Baseline mode runs crossover-then-mutation only.
    pub fn build_temp_population(
        &self,
        parents: &[Individual],
        rates: Rates,
        constants: &ConstantSet,
        rng: &mut EngineRng,
    ) -> Vec<Individual> {
        let seeds: Vec<Offspring> = parents
            .iter()
            .enumerate()
            .map(|(i, p)| Offspring { chromosome: p.chromosome.clone(), source: Some(i) })
            .collect();
        let (pc, pm) = (rates.crossover, rates.mutation);
        let batches = match self.cfg.mode {
            Mode::Adaptive => {
                let crossed = self.crossover_batch(&seeds, pc, rng);
                let mutated = self.mutation_batch(&seeds, pm, rng);
                let crossed_then_mutated = {
                    let c = self.crossover_batch(&seeds, pc, rng);
                    self.mutation_batch(&c, pm, rng)
                };
                let mutated_then_crossed = {
                    let m = self.mutation_batch(&seeds, pm, rng);
                    self.crossover_batch(&m, pc, rng)
                };
                vec![crossed, mutated, crossed_then_mutated, mutated_then_crossed]
            }
            Mode::Baseline => {
                let c = self.crossover_batch(&seeds, pc, rng);
                vec![self.mutation_batch(&c, pm, rng)]
            }
        };
        let mut temp = Vec::with_capacity(parents.len() * (1 + batches.len()));
        temp.extend_from_slice(parents);
        for child in batches.into_iter().flatten() {
            temp.push(match child.source {
                Some(i) => Individual { chromosome: child.chromosome, ..parents[i].clone() },
                None => self.evaluate(child.chromosome, constants),
            });
        }
        temp
    }

    /// In the second half of a run, regenerates the constant set with
    /// probability `rate` and re-evaluates the population. Returns whether it did.
    pub fn maybe_mutate_constants(
        &self,
        gen: usize,
        rate: f64,
        constants: &mut ConstantSet,
        population: &mut [Individual],
        rng: &mut EngineRng,
    ) -> bool {
        if !constants_phase(gen, self.cfg.max_gen) || !rng.random_bool(rate.clamp(0.0, 1.0)) {
            return false;
        }
        *constants = self.random_constants(rng);
        for ind in population.iter_mut() {
            ind.point = eval_chromosome(&ind.chromosome, constants);
            ind.fitness = self.fitness(&ind.point);
        }
        true
    }

    /// Elites first, then tournaments over `temp`; the same individual may win
    /// any number of tournaments.
    pub fn select(&self, temp: &[Individual], rng: &mut EngineRng) -> Vec<Individual> {
        let n = self.cfg.pop_size;
        let dir = self.problem.direction;
        let key = |i: usize| dir.key(temp[i].fitness);
        let mut order: Vec<usize> = (0..temp.len()).collect();
        order.sort_by(|&a, &b| key(a).total_cmp(&key(b)).then(a.cmp(&b)));
        let elites = self.cfg.elite_count().min(n).min(temp.len());
        let mut next: Vec<Individual> = order[..elites].iter().map(|&i| temp[i].clone()).collect();
        let size = self.cfg.tournament_size(temp.len());
        while next.len() < n {
            // members are distinct within a tournament; tournaments are independent
            let winner = index::sample(rng, temp.len(), size)
                .into_iter()
                .min_by(|&a, &b| key(a).total_cmp(&key(b)).then(a.cmp(&b)))
                .expect("tournament size is at least 1");
            next.push(temp[winner].clone());
        }
        next
    }

    fn best_index(&self, population: &[Individual]) -> usize {
        let dir = self.problem.direction;
        (0..population.len())
            .min_by(|&a, &b| dir.key(population[a].fitness).total_cmp(&dir.key(population[b].fitness)))
            .expect("population is non-empty")
    }

    fn reached_optimum(&self, fitness: f64) -> bool {
        self.problem
            .known_optimum
            .is_some_and(|opt| self.problem.direction.reaches(fitness, opt, self.cfg.termination_tolerance))
    }

    pub fn run(&self, seed: u64) -> RunResult {
        self.run_observed(seed, |_, _| {})
    }

    /// Runs the engine, calling `observe(generation, temp_population)` after each
    /// temporary population is built.
    pub fn run_observed<F>(&self, seed: u64, mut observe: F) -> RunResult
    where
        F: FnMut(usize, &[Individual]),
    {
        let mut rng = EngineRng::seed_from_u64(seed);
        let mut constants = self.random_constants(&mut rng);
        let mut population = self.initial_population(&constants, &mut rng);
        let dir = self.problem.direction;
        let mut best = population[self.best_index(&population)].clone();
        let mut best_generation = 0;
        let mut trace = Vec::new();
        let mut gen = 0;
        loop {
            let current = &population[self.best_index(&population)];
            if dir.better(current.fitness, best.fitness) {
                best = current.clone();
                best_generation = gen;
            }
            let reading = diversity(&population, dir);
            let rates = adapt_rates(reading.d, gen, &self.cfg, &self.controllers);
            let mut row = TraceRow {
                generation: gen,
                best_fitness: best.fitness,
                avg_fitness: reading.average,
                diversity: reading.d,
                rates,
                constant_reset: false,
                temp_size: 0,
            };
            let hit = self.reached_optimum(best.fitness);
            if hit || gen >= self.cfg.max_gen {
                trace.push(row);
                return RunResult { seed, best, best_generation, trace, hit_optimum: hit };
            }
            row.constant_reset =
                self.maybe_mutate_constants(gen, rates.constants, &mut constants, &mut population, &mut rng);
            let temp = self.build_temp_population(&population, rates, &constants, &mut rng);
            observe(gen, &temp);
            row.temp_size = temp.len();
            trace.push(row);
            population = self.select(&temp, &mut rng);
            gen += 1;
        }
    }
}

/// Convenience wrapper: builds an engine and runs it once.
pub fn run(problem: &Problem, cfg: &EngineConfig, seed: u64) -> Result<RunResult> {
    Ok(Engine::new(problem.clone(), cfg.clone())?.run(seed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::{builtin, Direction};
    use crate::decode::uses_constants;

    fn engine(name: &str, cfg: EngineConfig) -> Engine {
        Engine::new(builtin(name, None).unwrap(), cfg).unwrap()
    }

    fn small() -> EngineConfig {
        EngineConfig { pop_size: 20, max_gen: 40, ..EngineConfig::default() }
    }

    #[test]
    fn config_defaults_and_limits() {
        let cfg = EngineConfig::default();
        assert_eq!(cfg.tournament_size(500), 5);
        assert_eq!(cfg.elite_count(), 1);
        assert_eq!(EngineConfig { pop_size: 10, ..cfg.clone() }.tournament_size(50), 2);
        assert_eq!(cfg.tournament_size(1), 1);
        assert!(EngineConfig { pop_size: 1, ..cfg.clone() }.validate().is_err());
        assert!(EngineConfig { max_gen: 0, ..cfg.clone() }.validate().is_err());
        assert!(EngineConfig { elite_fraction: 2.0, ..cfg.clone() }.validate().is_err());
        let base = EngineConfig { mode: Mode::Baseline, ..cfg };
        assert_eq!(base.tournament_size(200), 4);
        assert_eq!(base.temp_size(), 200);
        assert_eq!("baseline".parse::<Mode>().unwrap(), Mode::Baseline);
        assert!("fast".parse::<Mode>().is_err());
    }

    fn same(a: &Individual, b: &Individual) -> bool {
        a.chromosome == b.chromosome && a.fitness.to_bits() == b.fitness.to_bits()
    }

    #[test]
    fn temp_population_sizes_and_parents() {
        let e = engine("f3", EngineConfig { pop_size: 100, ..small() });
        let mut rng = EngineRng::seed_from_u64(1);
        let cs = e.random_constants(&mut rng);
        let parents = e.initial_population(&cs, &mut rng);
        let rates = Rates { crossover: 0.3, mutation: 0.25, constants: 0.0 };
        let temp = e.build_temp_population(&parents, rates, &cs, &mut rng);
        assert_eq!(temp.len(), 500);
        assert!(temp[..100].iter().zip(&parents).all(|(t, p)| same(t, p)));
        for ind in &temp {
            assert_eq!(e.encoding().validate(&ind.chromosome), Ok(()));
            let fresh = e.evaluate(ind.chromosome.clone(), &cs);
            assert_eq!(fresh.fitness.to_bits(), ind.fitness.to_bits());
        }
    }

    #[test]
    fn zero_rates_clone_every_parent_five_times() {
        let e = engine("f1", EngineConfig { pop_size: 30, ..small() });
        let mut rng = EngineRng::seed_from_u64(2);
        let cs = e.random_constants(&mut rng);
        let parents = e.initial_population(&cs, &mut rng);
        let temp = e.build_temp_population(
            &parents,
            Rates { crossover: 0.0, mutation: 0.0, constants: 0.0 },
            &cs,
            &mut rng,
        );
        for p in &parents {
            let copies = temp.iter().filter(|t| t.chromosome == p.chromosome).count();
            let twins = parents.iter().filter(|q| q.chromosome == p.chromosome).count();
            assert_eq!(copies, 5 * twins);
        }
    }

    #[test]
    fn baseline_temp_population_is_doubled() {
        let e = engine("f1", EngineConfig { pop_size: 30, mode: Mode::Baseline, ..small() });
        let mut rng = EngineRng::seed_from_u64(3);
        let cs = e.random_constants(&mut rng);
        let parents = e.initial_population(&cs, &mut rng);
        assert_eq!(e.build_temp_population(&parents, BASELINE_RATES, &cs, &mut rng).len(), 60);
    }

    #[test]
    fn constants_untouched_in_first_half() {
        let e = engine("f3", small());
        let mut rng = EngineRng::seed_from_u64(4);
        let mut cs = e.random_constants(&mut rng);
        let mut pop = e.initial_population(&cs, &mut rng);
        let (cs0, pop0) = (cs.clone(), pop.clone());
        assert!(!e.maybe_mutate_constants(20, 1.0, &mut cs, &mut pop, &mut rng));
        assert!(!e.maybe_mutate_constants(30, 0.0, &mut cs, &mut pop, &mut rng));
        assert_eq!(cs, cs0);
        assert!(pop.iter().zip(&pop0).all(|(a, b)| same(a, b)));
        assert!(e.maybe_mutate_constants(30, 1.0, &mut cs, &mut pop, &mut rng));
        assert_ne!(cs, cs0);
        for (before, after) in pop0.iter().zip(&pop) {
            if !uses_constants(&before.chromosome) {
                assert_eq!(before.fitness.to_bits(), after.fitness.to_bits());
            }
        }
        assert!(pop0.iter().zip(&pop).any(|(b, a)| uses_constants(&b.chromosome) && b.fitness != a.fitness));
    }

    #[test]
    fn selection_keeps_the_best() {
        let e = engine("f2", EngineConfig { pop_size: 100, ..small() });
        let mut rng = EngineRng::seed_from_u64(5);
        let cs = e.random_constants(&mut rng);
        let parents = e.initial_population(&cs, &mut rng);
        let temp = e.build_temp_population(&parents, BASELINE_RATES, &cs, &mut rng);
        let best = temp.iter().map(|i| Direction::Minimize.key(i.fitness)).fold(f64::INFINITY, f64::min);
        let next = e.select(&temp, &mut rng);
        assert_eq!(next.len(), 100);
        assert_eq!(next[0].fitness, best);
    }

    #[test]
    fn full_size_tournaments_return_the_global_best() {
        let cfg = EngineConfig { pop_size: 10, tournament_fraction: 1.0, ..small() };
        let e = engine("f2", cfg);
        let mut rng = EngineRng::seed_from_u64(6);
        let cs = e.random_constants(&mut rng);
        let pop = e.initial_population(&cs, &mut rng);
        let best = pop.iter().map(|i| Direction::Minimize.key(i.fitness)).fold(f64::INFINITY, f64::min);
        let next = e.select(&pop, &mut rng);
        assert!(next.iter().all(|i| i.fitness == best));
    }

    #[test]
    fn non_finite_individuals_lose_tournaments() {
        let e = engine("f1", EngineConfig { pop_size: 4, tournament_fraction: 1.0, ..small() });
        let mut rng = EngineRng::seed_from_u64(7);
        let cs = e.random_constants(&mut rng);
        let mut temp = e.initial_population(&cs, &mut rng);
        temp[0].fitness = f64::NAN;
        temp[1].fitness = f64::INFINITY;
        temp[2].fitness = 5.0;
        temp[3].fitness = 6.0;
        for _ in 0..50 {
            assert!(e.select(&temp, &mut rng).iter().all(|i| i.fitness.is_finite()));
        }
    }

    #[test]
    fn runs_are_deterministic() {
        let e = engine("f3", small());
        let a = e.run(11);
        let b = e.run(11);
        assert_eq!(a, b);
        let c = engine("f6", small()).run(12);
        let d = engine("f6", small()).run(13);
        assert_ne!(c.trace, d.trace);
    }

    #[test]
    fn trace_invariants() {
        let e = engine("f6", EngineConfig { pop_size: 30, max_gen: 60, ..EngineConfig::default() });
        let r = e.run(21);
        assert_eq!(r.trace.len(), 61);
        assert!(!r.hit_optimum);
        for w in r.trace.windows(2) {
            assert!(w[1].best_fitness >= w[0].best_fitness);
        }
        for row in &r.trace {
            if row.generation <= 30 {
                assert_eq!(row.rates.constants, 0.0);
            }
        }
        assert_eq!(r.trace[r.best_generation].best_fitness, r.best.fitness);
        assert_eq!(e.problem().evaluate(&r.best.point), r.best.fitness);
    }

    #[test]
    fn out_of_box_points_are_infeasible() {
        let e = engine("f7", small());
        assert!(e.fitness(&[2.5]).is_nan());
        assert!(e.fitness(&[f64::NAN]).is_nan());
        assert_eq!(e.fitness(&[0.0]), 1.0);
        let loose = engine("f7", EngineConfig { enforce_bounds: false, ..small() });
        assert!(loose.fitness(&[2.5]).is_finite());
    }

    #[test]
    fn early_stop_on_optimum() {
        let e = engine("f2", EngineConfig { max_gen: 1000, ..EngineConfig::default() });
        let r = e.run(1);
        assert!(r.hit_optimum);
        assert_eq!(r.best.fitness, 0.0);
        assert_eq!(r.trace.last().unwrap().generation, r.best_generation);
    }
}
