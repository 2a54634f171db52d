//! Parameterized genetic-algorithm core.
//!
//! The engine mirrors the hardware split: four LFSR generators, a roulette
//! wheel selector feeding a parent store, crossover and mutation units, a
//! fitness/elitism stage and an observer that applies the stopping rules.
//! RNG draws happen in a fixed serial order, so a configuration and a
//! fitness function fully determine a run.

mod config;
mod engine;
mod lfsr;
mod operators;

use thiserror::Error;

pub use config::{CrossMethod, GaConfig, MethodSwitch, MutMethod};
pub use engine::{
    init_population, run, run_observed, step_generation, Fitness, GaResult, GenerationStats,
    StopReason,
};
pub use lfsr::{expand_seed, lfsr_next, mask, Lfsr, RngBank, TAPS};
pub use operators::{apply_elitism, crossover, mutate, roulette_select};

/// Chromosome bits, least significant bit first.
pub type Genome = u64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GaError {
    #[error("LFSR seeds must be nonzero")]
    ZeroSeed,
    #[error("every individual has zero fitness")]
    AllZeroFitness,
    #[error("invalid GA configuration: {0}")]
    Config(String),
}

/// Genomes and their scores, index-aligned.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Population {
    pub genomes: Vec<Genome>,
    pub scores: Vec<u32>,
}

impl Population {
    pub fn len(&self) -> usize {
        self.genomes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.genomes.is_empty()
    }
}
