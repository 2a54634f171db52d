use std::path::Path;

use fuzzychip::tracksim::{parse_waypoints, simulate, NoiseModel, StartPose, TrackerParams};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::CliError;
use crate::manifest::{run_stem, Job, RunManifest};
use crate::output::{ensure_dir, write_atomic, write_json};

fn default_max_steps() -> usize {
    100_000
}

/// Tracking run settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrackConfig {
    #[serde(default)]
    pub tracker: TrackerParams,
    #[serde(default)]
    pub start: StartPose,
    #[serde(default)]
    pub noise: NoiseModel,
    #[serde(default = "default_max_steps")]
    pub max_steps: usize,
}

impl Default for TrackConfig {
    fn default() -> Self {
        Self {
            tracker: TrackerParams::default(),
            start: StartPose::default(),
            noise: NoiseModel::NONE,
            max_steps: default_max_steps(),
        }
    }
}

/// Parses `sigma_d,sigma_theta`.
pub fn parse_noise(text: &str) -> Result<NoiseModel, CliError> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let bad = || CliError::Io(format!("--noise expects sigma_d,sigma_theta, got {text:?}"));
    if parts.len() != 2 {
        return Err(bad());
    }
    let sigma_d = parts[0].parse().map_err(|_| bad())?;
    let sigma_theta = parts[1].parse().map_err(|_| bad())?;
    let noise = NoiseModel {
        sigma_d,
        sigma_theta,
    };
    noise.validate()?;
    Ok(noise)
}

#[derive(Serialize)]
struct TrackSummary {
    run: usize,
    seed: u64,
    rows: usize,
    reached_end: bool,
    final_e_d: f64,
    max_abs_e_d: f64,
    max_abs_kappa: f64,
    final_deviation: f64,
}

pub fn plan(job: &Job) -> Result<RunManifest, CliError> {
    let Job::Track {
        path,
        config,
        seeds,
        ..
    } = job
    else {
        unreachable!("not a track job")
    };
    config.tracker.validate()?;
    config.noise.validate()?;
    parse_waypoints(&path.contents)?;
    let outputs = (0..seeds.len())
        .flat_map(|i| {
            let stem = run_stem("track", i);
            [format!("{stem}.csv"), format!("{stem}.json")]
        })
        .collect();
    Ok(RunManifest::new(job.clone(), outputs))
}

pub fn execute(job: &Job, out: &Path) -> Result<Vec<String>, CliError> {
    let Job::Track {
        path,
        config,
        seeds,
        ..
    } = job
    else {
        unreachable!("not a track job")
    };
    let waypoints = parse_waypoints(&path.contents)?;
    let logs = seeds
        .par_iter()
        .map(|&seed| {
            simulate(
                &waypoints,
                config.start,
                &config.tracker,
                config.noise,
                seed,
                config.max_steps,
            )
        })
        .collect::<Result<Vec<_>, _>>()?;

    ensure_dir(out)?;
    let mut lines = Vec::new();
    for (i, (log, &seed)) in logs.iter().zip(seeds).enumerate() {
        let stem = run_stem("track", i);
        let mut csv = Vec::new();
        log.write_csv(&mut csv)
            .map_err(|e| CliError::io(&stem, e))?;
        write_atomic(&out.join(format!("{stem}.csv")), &csv)?;
        let last = log.rows.last().expect("a trace has rows");
        let summary = TrackSummary {
            run: i,
            seed,
            rows: log.rows.len(),
            reached_end: log.reached_end,
            final_e_d: last.e_d,
            max_abs_e_d: log.max_abs_e_d(),
            max_abs_kappa: log.rows.iter().map(|r| r.kappa.abs()).fold(0.0, f64::max),
            final_deviation: log.final_deviation(),
        };
        write_json(&out.join(format!("{stem}.json")), &summary)?;
        lines.push(format!(
            "run {i} seed {seed}: {} steps, final e_d {:.1} mm, max |e_d| {:.1} mm, final deviation {:.1} mm",
            summary.rows, summary.final_e_d, summary.max_abs_e_d, summary.final_deviation
        ));
    }
    Ok(lines)
}
