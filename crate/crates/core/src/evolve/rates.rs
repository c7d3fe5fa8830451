//! Diversity reading and rate scheduling.

use crate::bench::Direction;
use crate::fuzzy::{RateControllers, DIVERSITY};

use super::{EngineConfig, Individual, Mode};

/// Rates used when the diversity reading falls below the fuzzy universe.
pub const FIXED_CROSSOVER: f64 = 0.4;
pub const FIXED_MUTATION: f64 = 0.1;

/// Fixed rates of the non-adaptive baseline.
pub const BASELINE_RATES: Rates = Rates { crossover: 0.3, mutation: 0.2, constants: 0.01 };

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rates {
    pub crossover: f64,
    pub mutation: f64,
    /// Probability of regenerating the constant set this generation.
    pub constants: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiversityReading {
    pub d: f64,
    pub best: f64,
    pub average: f64,
    pub direction: Direction,
}

/// Concentration of fitness values: best/mean when minimizing, mean/best when
/// maximizing, clamped into `[0, 1]`. A value near 1 means a converged
/// population. Non-finite fitness values are ignored; a population without
/// any finite fitness reads 0.5.
pub fn diversity(population: &[Individual], direction: Direction) -> DiversityReading {
    let mut best = f64::NAN;
    let mut sum = 0.0;
    let mut count = 0usize;
    for f in population.iter().map(|i| i.fitness).filter(|f| f.is_finite()) {
        if count == 0 || direction.better(f, best) {
            best = f;
        }
        sum += f;
        count += 1;
    }
    if count == 0 {
        return DiversityReading { d: 0.5, best: f64::NAN, average: f64::NAN, direction };
    }
    let average = sum / count as f64;
    let d = if best == average {
        1.0
    } else {
        let ratio = match direction {
            Direction::Minimize => best / average,
            Direction::Maximize => average / best,
        };
        if ratio.is_nan() {
            0.0
        } else {
            ratio.clamp(0.0, 1.0)
        }
    };
    DiversityReading { d, best, average, direction }
}

/// True once the constant-set controller is active (second half of the run).
pub fn constants_phase(gen: usize, max_gen: usize) -> bool {
    2 * gen > max_gen
}

pub fn adapt_rates(d: f64, gen: usize, cfg: &EngineConfig, controllers: &RateControllers) -> Rates {
    if cfg.mode == Mode::Baseline {
        return BASELINE_RATES;
    }
    let (crossover, mutation) = if d < DIVERSITY.lo {
        (FIXED_CROSSOVER, FIXED_MUTATION)
    } else {
        (controllers.crossover.infer(d), controllers.mutation.infer(d))
    };
    let constants = if constants_phase(gen, cfg.max_gen) {
        controllers.constants.infer(gen as f64, d.max(DIVERSITY.lo))
    } else {
        0.0
    };
    Rates { crossover, mutation, constants }
}
