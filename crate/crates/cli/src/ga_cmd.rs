use std::fmt::Write as _;
use std::path::Path;

use fuzzychip::ga::{run_observed, Fitness, GaConfig, GaResult};
use fuzzychip::problems::{
    bits_for_permutations, parse_tsplib, tour_length, Benchmark, BenchmarkFitness, TspFitness,
    TspInstance,
};
use log::{info, warn};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::CliError;
use crate::manifest::{run_stem, InputFile, Job, RunManifest};
use crate::output::{ensure_dir, parse_json, read_text, write_atomic, write_json};
use crate::seeds::SeedGroup;

pub const GENERATION_HEADER: &str = "generation,best_score,mean_score,best_genome";

pub fn load_config(path: Option<&Path>) -> Result<(Option<String>, GaConfig), CliError> {
    match path {
        Some(p) => Ok((
            Some(p.display().to_string()),
            parse_json(&read_text(p)?, &p.display().to_string())?,
        )),
        None => Ok((None, GaConfig::table_ii())),
    }
}

pub fn load_instance(file: &InputFile) -> Result<TspInstance, CliError> {
    parse_tsplib(&file.contents).map_err(|e| CliError::Io(format!("{}: {e}", file.path)))
}

/// Widens the genome so every tour has a code; true when it had to.
fn widen_for(cfg: &mut GaConfig, inst: &TspInstance) -> Result<bool, CliError> {
    let n = inst.dimension();
    let needed = bits_for_permutations(n)
        .filter(|&b| b <= 64)
        .ok_or_else(|| CliError::Invalid(format!("{n} cities do not fit a 64-bit genome")))?;
    let widen = cfg.genom_lngt < needed;
    if widen {
        cfg.genom_lngt = needed;
    }
    Ok(widen)
}

#[derive(Serialize)]
struct BenchmarkRecord<'a> {
    run: usize,
    seeds: &'a SeedGroup,
    function: Benchmark,
    genom_lngt: u8,
    result: &'a GaResult,
    best_point: (f64, f64),
    best_value: f64,
}

#[derive(Serialize)]
struct TspRecord<'a> {
    run: usize,
    seeds: &'a SeedGroup,
    instance: &'a str,
    dimension: usize,
    genom_lngt: u8,
    result: &'a GaResult,
    tour: String,
    tour_length: i64,
}

enum Problem {
    Bench(BenchmarkFitness),
    Tsp(TspInstance, TspFitness),
}

impl Problem {
    fn fitness(&self) -> &(dyn Fitness + Sync) {
        match self {
            Problem::Bench(f) => f,
            Problem::Tsp(_, f) => f,
        }
    }
}

/// Runs one seed group; returns the generation CSV and result.
fn run_one(
    cfg: &GaConfig,
    seeds: &SeedGroup,
    fitness: &(dyn Fitness + Sync),
) -> Result<(String, GaResult), CliError> {
    let cfg = GaConfig {
        seeds: seeds.lfsr,
        ..cfg.clone()
    };
    let mut csv = String::from(GENERATION_HEADER);
    csv.push('\n');
    let result = run_observed(&cfg, fitness, |s, _| {
        writeln!(
            csv,
            "{},{},{},{:#x}",
            s.generation, s.best_score, s.mean_score, s.best_genome
        )
        .unwrap();
    })?;
    Ok((csv, result))
}

pub fn outputs(prefix: &str, runs: usize) -> Vec<String> {
    (0..runs)
        .flat_map(|i| {
            let stem = run_stem(prefix, i);
            [format!("{stem}.csv"), format!("{stem}.json")]
        })
        .collect()
}

struct Prepared<'a> {
    cfg: GaConfig,
    problem: Problem,
    seeds: &'a [SeedGroup],
    print_tour: bool,
    widened_from: Option<u8>,
}

fn tsp_problem(
    config: &GaConfig,
    file: &InputFile,
) -> Result<(GaConfig, Problem, Option<u8>), CliError> {
    let mut cfg = config.clone();
    let inst = load_instance(file)?;
    let widened_from = widen_for(&mut cfg, &inst)?.then_some(config.genom_lngt);
    cfg.validate()?;
    let fit = TspFitness::new(&inst, cfg.genom_lngt, cfg.score_sz)?;
    Ok((cfg, Problem::Tsp(inst, fit), widened_from))
}

fn prepare(job: &Job) -> Result<Prepared<'_>, CliError> {
    match job {
        Job::Ga {
            function,
            config,
            instance,
            seeds,
            ..
        } => {
            if function.eq_ignore_ascii_case("tsp") {
                let file = instance
                    .as_ref()
                    .ok_or_else(|| CliError::Invalid("--fn tsp needs --instance".into()))?;
                let (cfg, problem, widened_from) = tsp_problem(config, file)?;
                Ok(Prepared {
                    cfg,
                    problem,
                    seeds,
                    print_tour: false,
                    widened_from,
                })
            } else {
                let func: Benchmark = function.parse().map_err(CliError::Invalid)?;
                config.validate()?;
                let fit = BenchmarkFitness::new(func, config.genom_lngt, config.score_sz)?;
                Ok(Prepared {
                    cfg: config.clone(),
                    problem: Problem::Bench(fit),
                    seeds,
                    print_tour: false,
                    widened_from: None,
                })
            }
        }
        Job::Tsp {
            instance,
            config,
            seeds,
            ..
        } => {
            let (cfg, problem, widened_from) = tsp_problem(config, instance)?;
            Ok(Prepared {
                cfg,
                problem,
                seeds,
                print_tour: true,
                widened_from,
            })
        }
        _ => unreachable!("not a GA job"),
    }
}

/// Validates a GA or TSP job and lists the files it will write.
pub fn plan(job: &Job) -> Result<RunManifest, CliError> {
    let prepared = prepare(job)?;
    let prefix = if prepared.print_tour { "tsp" } else { "ga" };
    Ok(RunManifest::new(
        job.clone(),
        outputs(prefix, prepared.seeds.len()),
    ))
}

pub fn execute(job: &Job, out: &Path) -> Result<Vec<String>, CliError> {
    let Prepared {
        cfg,
        problem,
        seeds,
        print_tour,
        widened_from,
    } = prepare(job)?;
    if let Some(bits) = widened_from {
        warn!(
            "genom_lngt {bits} cannot index every tour; widened to {} bits",
            cfg.genom_lngt
        );
    }
    let prefix = if print_tour { "tsp" } else { "ga" };
    info!("{} run(s), {} generations each", seeds.len(), cfg.max_gen);
    let fitness = problem.fitness();
    let runs: Vec<(String, GaResult)> = seeds
        .par_iter()
        .map(|s| run_one(&cfg, s, fitness))
        .collect::<Result<_, _>>()?;

    ensure_dir(out)?;
    let mut lines = Vec::new();
    for (i, ((csv, result), seeds)) in runs.iter().zip(seeds).enumerate() {
        let stem = run_stem(prefix, i);
        write_atomic(&out.join(format!("{stem}.csv")), csv.as_bytes())?;
        let json = out.join(format!("{stem}.json"));
        match &problem {
            Problem::Bench(fit) => {
                let (x1, x2) = fit.point(result.best_genome);
                write_json(
                    &json,
                    &BenchmarkRecord {
                        run: i,
                        seeds,
                        function: fit.func,
                        genom_lngt: cfg.genom_lngt,
                        result,
                        best_point: (x1, x2),
                        best_value: fit.value(result.best_genome),
                    },
                )?;
                lines.push(format!(
                    "run {i}: best score {} at ({x1}, {x2}) after {} generation(s)",
                    result.best_score, result.generations_run
                ));
            }
            Problem::Tsp(inst, fit) => {
                let tour = fit.tour(result.best_genome);
                let length = tour_length(inst, &tour);
                write_json(
                    &json,
                    &TspRecord {
                        run: i,
                        seeds,
                        instance: &inst.name,
                        dimension: inst.dimension(),
                        genom_lngt: cfg.genom_lngt,
                        result,
                        tour: tour.to_string(),
                        tour_length: length,
                    },
                )?;
                let mut line = format!(
                    "run {i}: {} dimension {} best score {}",
                    inst.name,
                    inst.dimension(),
                    result.best_score
                );
                if print_tour {
                    write!(line, " length {length} tour {tour}").unwrap();
                }
                lines.push(line);
            }
        }
    }
    Ok(lines)
}
