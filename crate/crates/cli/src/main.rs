//! `fuzzychip` command-line front end.
//!
//! Exit codes: 0 on success, 1 when inputs are well formed but invalid,
//! 2 on I/O or parse errors. Verbosity follows the `FUZZYCHIP_LOG`
//! environment variable (`error`, `warn`, `info`, `debug`, `trace`).

mod error;
mod flc_cmd;
mod ga_cmd;
mod manifest;
mod output;
mod seeds;
mod track_cmd;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use log::info;

use crate::error::CliError;
use crate::flc_cmd::Template;
use crate::manifest::{InputFile, Job, RunManifest};
use crate::output::{ensure_dir, parse_json, read_text};
use crate::track_cmd::TrackConfig;

#[derive(Parser)]
#[command(
    name = "fuzzychip",
    version,
    about = "Fixed-point fuzzy inference, GA and path-tracking tools"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fuzzy core: validate, evaluate, time or sweep a spec.
    Flc {
        #[command(subcommand)]
        action: FlcAction,
    },
    /// Run the GA on a benchmark function or a TSP instance.
    Ga(GaArgs),
    /// Solve a TSPLIB instance with the GA.
    Tsp(TspArgs),
    /// Simulate path tracking.
    Track(TrackArgs),
    /// Re-run the command recorded in a manifest.
    Replay(ReplayArgs),
}

#[derive(Subcommand)]
enum FlcAction {
    /// Check a spec and print the report.
    Validate {
        #[arg(long)]
        spec: PathBuf,
    },
    /// Evaluate one input vector of integer codes.
    Eval {
        #[arg(long)]
        spec: PathBuf,
        /// Comma-separated input codes.
        #[arg(long, value_delimiter = ',', required = true)]
        inputs: Vec<u32>,
    },
    /// Print latency, cycles per sample and sample rate.
    Timing {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Evaluate a one- or two-input spec over its input grid.
    Sweep {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Grid stride in input codes.
        #[arg(long, default_value_t = 1)]
        step: u32,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Print a built-in spec as JSON.
    Template {
        #[arg(long, value_enum, default_value = "table-i")]
        kind: Template,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct GaArgs {
    /// sphere, rosenbrock, rastrigin, step or tsp.
    #[arg(long = "fn")]
    function: String,
    #[arg(long)]
    config: Option<PathBuf>,
    /// TSPLIB file, required with `--fn tsp`.
    #[arg(long)]
    instance: Option<PathBuf>,
    #[arg(long)]
    seeds: Option<String>,
    #[arg(long)]
    max_gen: Option<u32>,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Args)]
struct TspArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seeds: Option<String>,
    #[arg(long)]
    max_gen: Option<u32>,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Args)]
struct TrackArgs {
    /// Waypoint file, one "x y" pair in mm per line.
    #[arg(long)]
    path: PathBuf,
    #[arg(long)]
    config: Option<PathBuf>,
    /// Odometry noise as `sigma_d,sigma_theta`.
    #[arg(long)]
    noise: Option<String>,
    #[arg(long)]
    seeds: Option<String>,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Args)]
struct ReplayArgs {
    #[arg(long)]
    manifest: PathBuf,
    /// Output directory; defaults to the manifest's directory.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

fn ga_seeds(
    text: Option<&str>,
    cfg: &fuzzychip::ga::GaConfig,
) -> Result<Vec<seeds::SeedGroup>, CliError> {
    match text {
        Some(t) => seeds::parse_ga_seeds(t),
        None => Ok(vec![seeds::SeedGroup {
            master: None,
            lfsr: cfg.seeds,
        }]),
    }
}

fn plan(job: &Job) -> Result<RunManifest, CliError> {
    match job {
        Job::FlcSweep { .. } => Ok(flc_cmd::sweep_manifest(job.clone())),
        Job::Ga { .. } | Job::Tsp { .. } => ga_cmd::plan(job),
        Job::Track { .. } => track_cmd::plan(job),
    }
}

/// Writes the manifest, then runs the job on `jobs` threads.
fn launch(job: Job, out: &Path, jobs: usize) -> Result<(), CliError> {
    let manifest = plan(&job)?;
    ensure_dir(out)?;
    manifest.save(out)?;
    info!("manifest written to {}", out.display());
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| CliError::Io(e.to_string()))?;
    let lines = pool.install(|| match &job {
        Job::FlcSweep { spec, step } => flc_cmd::run_sweep(spec, *step, out),
        Job::Ga { .. } | Job::Tsp { .. } => ga_cmd::execute(&job, out),
        Job::Track { .. } => track_cmd::execute(&job, out),
    })?;
    for line in lines {
        println!("{line}");
    }
    Ok(())
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Flc { action } => match action {
            FlcAction::Validate { spec } => flc_cmd::validate(&spec),
            FlcAction::Eval { spec, inputs } => flc_cmd::eval(&spec, &inputs),
            FlcAction::Timing { spec, json } => flc_cmd::timing(&spec, json),
            FlcAction::Sweep {
                spec,
                out,
                step,
                jobs,
            } => launch(flc_cmd::sweep_job(&spec, step)?, &out, jobs),
            FlcAction::Template { kind, out } => flc_cmd::template(kind, out.as_deref()),
        },
        Command::Ga(a) => {
            let (config_path, mut config) = ga_cmd::load_config(a.config.as_deref())?;
            if let Some(g) = a.max_gen {
                config.max_gen = g;
            }
            let seeds = ga_seeds(a.seeds.as_deref(), &config)?;
            let instance = a.instance.as_deref().map(InputFile::load).transpose()?;
            let job = Job::Ga {
                function: a.function,
                config_path,
                config,
                instance,
                seeds,
            };
            launch(job, &a.out, a.jobs)
        }
        Command::Tsp(a) => {
            let (config_path, mut config) = ga_cmd::load_config(a.config.as_deref())?;
            if let Some(g) = a.max_gen {
                config.max_gen = g;
            }
            let seeds = ga_seeds(a.seeds.as_deref(), &config)?;
            let job = Job::Tsp {
                instance: InputFile::load(&a.instance)?,
                config_path,
                config,
                seeds,
            };
            launch(job, &a.out, a.jobs)
        }
        Command::Track(a) => {
            let (config_path, mut config) = match a.config.as_deref() {
                Some(p) => (
                    Some(p.display().to_string()),
                    parse_json::<TrackConfig>(&read_text(p)?, &p.display().to_string())?,
                ),
                None => (None, TrackConfig::default()),
            };
            if let Some(n) = a.noise.as_deref() {
                config.noise = track_cmd::parse_noise(n)?;
            }
            let seeds = match a.seeds.as_deref() {
                Some(s) => seeds::parse_values(s)?,
                None => vec![0],
            };
            let job = Job::Track {
                path: InputFile::load(&a.path)?,
                config_path,
                config,
                seeds,
            };
            launch(job, &a.out, a.jobs)
        }
        Command::Replay(a) => {
            let manifest = RunManifest::load(&a.manifest)?;
            let out = match a.out {
                Some(o) => o,
                None => a
                    .manifest
                    .parent()
                    .map(Path::to_path_buf)
                    .unwrap_or_else(|| PathBuf::from(".")),
            };
            launch(manifest.job, &out, a.jobs)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("FUZZYCHIP_LOG", "warn")).init();
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
