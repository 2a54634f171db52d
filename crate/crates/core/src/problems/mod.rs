//! Fitness providers for the GA core: TSPLIB instances with a Lehmer-code
//! genome, and two-variable benchmark functions.

mod benchmark;
mod lehmer;
mod tsplib;

use thiserror::Error;

use crate::fixedq::max_code;
use crate::ga::{Fitness, Genome};

pub use benchmark::{Benchmark, BenchmarkFitness, MAX_BENCHMARK_BITS};
pub use lehmer::{bits_for_permutations, factorial, lehmer_decode, lehmer_encode};
pub use tsplib::{
    distance, distance_matrix, parse_tsplib, to_tsplib, EdgeWeightType, ParseError, TspInstance,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProblemError {
    #[error("genome width {bits}: {reason}")]
    GenomeWidth { bits: u8, reason: String },
    #[error("not a tour: {0}")]
    InvalidTour(String),
}

/// A closed tour visiting every city once.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tour(Vec<usize>);

impl Tour {
    pub fn new(perm: Vec<usize>) -> Result<Self, ProblemError> {
        let mut seen = vec![false; perm.len()];
        for &c in &perm {
            if c >= perm.len() || std::mem::replace(&mut seen[c], true) {
                return Err(ProblemError::InvalidTour(format!("{perm:?}")));
            }
        }
        Ok(Self(perm))
    }

    pub fn from_genome(genome: Genome, n: usize) -> Self {
        Self(lehmer_decode(genome, n))
    }

    pub fn cities(&self) -> &[usize] {
        &self.0
    }
}

impl std::fmt::Display for Tour {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

fn closed_length(dist: &[Vec<i64>], perm: &[usize]) -> i64 {
    let n = perm.len();
    (0..n).map(|k| dist[perm[k]][perm[(k + 1) % n]]).sum()
}

/// Length of the closed tour including the edge back to the start.
pub fn tour_length(inst: &TspInstance, tour: &Tour) -> i64 {
    let n = tour.0.len();
    (0..n)
        .map(|k| distance(inst, tour.0[k], tour.0[(k + 1) % n]))
        .sum()
}

/// Maximized TSP score: `n * longest_edge - tour_length`, clamped to the
/// score width.
#[derive(Debug, Clone)]
pub struct TspFitness {
    dist: Vec<Vec<i64>>,
    l_max: i64,
    score_top: u32,
}

impl TspFitness {
    pub fn new(inst: &TspInstance, genom_lngt: u8, score_sz: u8) -> Result<Self, ProblemError> {
        let n = inst.dimension();
        let needed = bits_for_permutations(n).unwrap_or(u8::MAX);
        if needed > genom_lngt {
            return Err(ProblemError::GenomeWidth {
                bits: genom_lngt,
                reason: format!("{n} cities need {needed} bits to index every tour"),
            });
        }
        let dist = distance_matrix(inst);
        let longest = dist.iter().flatten().copied().max().unwrap_or(0);
        Ok(Self {
            l_max: n as i64 * longest,
            dist,
            score_top: max_code(score_sz),
        })
    }

    pub fn cities(&self) -> usize {
        self.dist.len()
    }

    pub fn l_max(&self) -> i64 {
        self.l_max
    }

    pub fn tour(&self, genome: Genome) -> Tour {
        Tour::from_genome(genome, self.cities())
    }

    pub fn length(&self, genome: Genome) -> i64 {
        closed_length(&self.dist, &lehmer_decode(genome, self.cities()))
    }

    pub fn score_for_length(&self, length: i64) -> u32 {
        (self.l_max - length).clamp(0, i64::from(self.score_top)) as u32
    }
}

impl Fitness for TspFitness {
    fn score(&self, genome: Genome) -> u32 {
        self.score_for_length(self.length(genome))
    }
}
