use serde::Serialize;

use super::config::GaConfig;
use super::lfsr::RngBank;
use super::operators::{apply_elitism, crossover, mutate, roulette_select};
use super::{GaError, Genome, Population};
use crate::fixedq::max_code;

/// A fitness provider. Larger scores are better; the engine clamps scores
/// to `score_sz` bits.
pub trait Fitness {
    fn score(&self, genome: Genome) -> u32;
}

impl<F: Fn(Genome) -> u32> Fitness for F {
    fn score(&self, genome: Genome) -> u32 {
        self(genome)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    MaxGen,
    FitnessLimit,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GaResult {
    pub best_genome: Genome,
    pub best_score: u32,
    pub generations_run: u32,
    pub stop_reason: StopReason,
}

/// Observer record for one generation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GenerationStats {
    pub generation: u32,
    pub best_score: u32,
    pub mean_score: f64,
    pub best_genome: Genome,
}

impl GenerationStats {
    pub fn of(generation: u32, pop: &Population) -> Self {
        let (best, &best_score) =
            pop.scores
                .iter()
                .enumerate()
                .fold(
                    (0, &pop.scores[0]),
                    |acc, (i, s)| if *s > *acc.1 { (i, s) } else { acc },
                );
        let sum: u64 = pop.scores.iter().map(|&s| u64::from(s)).sum();
        Self {
            generation,
            best_score,
            mean_score: sum as f64 / pop.len() as f64,
            best_genome: pop.genomes[best],
        }
    }
}

fn evaluate<F: Fitness + ?Sized>(cfg: &GaConfig, fitness: &F, genomes: &[Genome]) -> Vec<u32> {
    let cap = max_code(cfg.score_sz);
    genomes.iter().map(|&g| fitness.score(g).min(cap)).collect()
}

/// Random initial population from the initialization stream.
pub fn init_population<F: Fitness + ?Sized>(
    cfg: &GaConfig,
    fitness: &F,
    rngs: &mut RngBank,
) -> Population {
    let genomes: Vec<Genome> = (0..cfg.pop_sz)
        .map(|_| rngs.init.next_bits(cfg.genom_lngt))
        .collect();
    let scores = evaluate(cfg, fitness, &genomes);
    Population { genomes, scores }
}

/// One generation: roulette selection into the parent store, pairwise
/// crossover, mutation of every child, evaluation, elitism.
pub fn step_generation<F: Fitness + ?Sized>(
    pop: &Population,
    cfg: &GaConfig,
    generation: u32,
    fitness: &F,
    rngs: &mut RngBank,
) -> Population {
    let (cross_method, mut_method) = cfg.methods_at(generation);
    let wanted = cfg.pop_sz - cfg.elite;
    let res = cfg.scaling_factor_res;

    let parents: Vec<Genome> = (0..wanted)
        .map(|_| {
            let word = rngs.selection.next_word();
            let r = u32::from(word) & ((1u32 << res) - 1);
            let idx = match roulette_select(&pop.scores, r, res) {
                Ok(i) => i,
                Err(_) => usize::from(word) % pop.len(),
            };
            pop.genomes[idx]
        })
        .collect();

    let mut children = Vec::with_capacity(wanted);
    for pair in parents.chunks(2) {
        match *pair {
            [a, b] => {
                let (c1, c2) = crossover(a, b, cross_method, cfg.genom_lngt, &mut rngs.crossover);
                children.push(c1);
                children.push(c2);
            }
            // odd parent count (odd elite): the last parent passes unpaired
            [a] => children.push(a),
            _ => unreachable!(),
        }
    }
    for child in &mut children {
        *child = mutate(
            *child,
            mut_method,
            cfg.mr,
            cfg.mut_res,
            cfg.genom_lngt,
            &mut rngs.mutation,
        );
    }
    let scores = evaluate(cfg, fitness, &children);
    apply_elitism(pop, children, scores, cfg.elite)
}

/// Runs until the best score reaches the fitness limit or `max_gen`
/// generations have been stepped. `observer` sees generation 0 and every
/// generation after it.
pub fn run_observed<F: Fitness + ?Sized>(
    cfg: &GaConfig,
    fitness: &F,
    mut observer: impl FnMut(&GenerationStats, &Population),
) -> Result<GaResult, GaError> {
    cfg.validate()?;
    let mut rngs = RngBank::new(cfg.seeds)?;
    let mut pop = init_population(cfg, fitness, &mut rngs);
    let stats = GenerationStats::of(0, &pop);
    observer(&stats, &pop);
    let mut best = (stats.best_genome, stats.best_score);
    let reached = |score: u32| cfg.fitness_limit.is_some_and(|limit| score >= limit);

    if reached(best.1) {
        return Ok(GaResult {
            best_genome: best.0,
            best_score: best.1,
            generations_run: 0,
            stop_reason: StopReason::FitnessLimit,
        });
    }
    for generation in 1..=cfg.max_gen {
        pop = step_generation(&pop, cfg, generation, fitness, &mut rngs);
        let stats = GenerationStats::of(generation, &pop);
        observer(&stats, &pop);
        if stats.best_score > best.1 {
            best = (stats.best_genome, stats.best_score);
        }
        if reached(best.1) {
            return Ok(GaResult {
                best_genome: best.0,
                best_score: best.1,
                generations_run: generation,
                stop_reason: StopReason::FitnessLimit,
            });
        }
    }
    Ok(GaResult {
        best_genome: best.0,
        best_score: best.1,
        generations_run: cfg.max_gen,
        stop_reason: StopReason::MaxGen,
    })
}

pub fn run<F: Fitness + ?Sized>(cfg: &GaConfig, fitness: &F) -> Result<GaResult, GaError> {
    run_observed(cfg, fitness, |_, _| {})
}
