//! Fuzzy-adaptive multicellular gene expression programming for numeric
//! function optimization.
//!
//! Genomes decode to candidate points of an objective; the crossover, mutation
//! and constant-set mutation rates are re-tuned every generation by Mamdani
//! fuzzy controllers driven by how concentrated the population's fitness is.

pub mod bench;
pub mod decode;
pub mod error;
pub mod evolve;
pub mod experiment;
pub mod fuzzy;
pub mod genome;

pub use bench::{builtin, Direction, Problem};
pub use error::{Error, Result};
pub use evolve::{Engine, EngineConfig, Mode, RunResult, TraceRow};
pub use experiment::{run_experiment, Summary};
