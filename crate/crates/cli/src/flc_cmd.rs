use std::fmt::Write as _;
use std::path::Path;

use fuzzychip::fixedq::{max_code, FixedWord};
use fuzzychip::flc::{estimate_timing, infer, validate_spec, FlcError, FlcSpec};
use fuzzychip::flcref::{infer_real, lift, lift_input, lift_output};
use fuzzychip::tracksim::{build_tracker_spec, TrackerParams};

use crate::error::CliError;
use crate::manifest::{InputFile, Job, RunManifest};
use crate::output::{ensure_dir, parse_json, read_text, write_atomic};

pub const SWEEP_NAME: &str = "sweep.csv";

pub fn load_spec(path: &Path) -> Result<FlcSpec, CliError> {
    parse_json(&read_text(path)?, &path.display().to_string())
}

/// Prints the validation report; violations give exit code 1.
pub fn validate(path: &Path) -> Result<(), CliError> {
    let spec = load_spec(path)?;
    let report = validate_spec(&spec);
    println!("{report}");
    if report.is_ok() {
        Ok(())
    } else {
        Err(CliError::Invalid(format!(
            "{}: {} violation(s)",
            path.display(),
            report.violations.len()
        )))
    }
}

fn checked(spec: FlcSpec) -> Result<FlcSpec, CliError> {
    let report = validate_spec(&spec);
    if report.is_ok() {
        Ok(spec)
    } else {
        Err(CliError::Invalid(format!("invalid spec: {report}")))
    }
}

/// Trims a fixed-decimal rendering to its significant digits.
pub fn trim_number(x: f64, decimals: usize) -> String {
    let s = format!("{x:.decimals$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

pub fn eval(path: &Path, inputs: &[u32]) -> Result<(), CliError> {
    let spec = checked(load_spec(path)?)?;
    if inputs.len() != spec.n_inputs() {
        return Err(CliError::Invalid(format!(
            "expected {} inputs, got {}",
            spec.n_inputs(),
            inputs.len()
        )));
    }
    let words = inputs
        .iter()
        .map(|&v| FixedWord::new(v, spec.in_bits))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| CliError::Invalid(e.to_string()))?;
    let fixed = infer(&spec, &words)?;
    let real_inputs: Vec<f64> = inputs
        .iter()
        .map(|&v| lift_input(v, spec.in_bits))
        .collect();
    let reference =
        infer_real(&lift(&spec), &real_inputs).map_err(|e| CliError::Invalid(e.to_string()))?;
    let lifted = lift_output(fixed.value(), spec.out_bits);
    println!("fixed_code {}", fixed.value());
    println!("fixed {lifted}");
    println!("reference {reference}");
    println!("difference {}", lifted - reference);
    Ok(())
}

pub fn timing(path: &Path, json: bool) -> Result<(), CliError> {
    let spec = checked(load_spec(path)?)?;
    let report = estimate_timing(&spec);
    if json {
        println!(
            "{}",
            serde_json::to_string_pretty(&report).expect("plain data")
        );
    } else {
        println!("latency {} ns", trim_number(report.latency_ns, 6));
        println!("cycles per sample {}", report.cycles_per_sample);
        println!(
            "sample rate {} MHz",
            trim_number(report.sample_rate_hz / 1e6, 6)
        );
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Template {
    TableI,
    Tracker,
}

pub fn template(kind: Template, out: Option<&Path>) -> Result<(), CliError> {
    let spec = match kind {
        Template::TableI => FlcSpec::table_i(),
        Template::Tracker => build_tracker_spec(&TrackerParams::default()),
    };
    let mut text = serde_json::to_string_pretty(&spec).expect("plain data");
    text.push('\n');
    match out {
        Some(p) => write_atomic(p, text.as_bytes()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn sweep_job(path: &Path, step: u32) -> Result<Job, CliError> {
    if step == 0 {
        return Err(CliError::Invalid("step must be positive".into()));
    }
    Ok(Job::FlcSweep {
        spec: InputFile::load(path)?,
        step,
    })
}

/// Grid evaluation of a one- or two-input spec against the reference.
pub fn run_sweep(spec_text: &InputFile, step: u32, out: &Path) -> Result<Vec<String>, CliError> {
    let spec = checked(parse_json::<FlcSpec>(&spec_text.contents, &spec_text.path)?)?;
    let n = spec.n_inputs();
    if n > 2 {
        return Err(CliError::Invalid(format!(
            "sweep supports at most 2 inputs, spec has {n}"
        )));
    }
    let top = max_code(spec.in_bits);
    let axis: Vec<u32> = (0..=top).step_by(step as usize).collect();
    let real = lift(&spec);
    let mut csv = String::new();
    csv.push_str(if n == 1 {
        "x0,fixed_code,fixed,reference,difference\n"
    } else {
        "x0,x1,fixed_code,fixed,reference,difference\n"
    });
    let points: Vec<Vec<u32>> = if n == 1 {
        axis.iter().map(|&a| vec![a]).collect()
    } else {
        axis.iter()
            .flat_map(|&a| axis.iter().map(move |&b| vec![a, b]))
            .collect()
    };
    for p in points {
        let words: Vec<FixedWord> = p
            .iter()
            .map(|&v| FixedWord::new(v, spec.in_bits).expect("within universe"))
            .collect();
        for v in &p {
            write!(csv, "{v},").unwrap();
        }
        match infer(&spec, &words) {
            Ok(y) => {
                let xr: Vec<f64> = p.iter().map(|&v| lift_input(v, spec.in_bits)).collect();
                let reference =
                    infer_real(&real, &xr).map_err(|e| CliError::Invalid(e.to_string()))?;
                let lifted = lift_output(y.value(), spec.out_bits);
                writeln!(
                    csv,
                    "{},{lifted},{reference},{}",
                    y.value(),
                    lifted - reference
                )
                .unwrap();
            }
            // zero total weight has no defined output
            Err(FlcError::DenominatorZero) => writeln!(csv, ",,,").unwrap(),
            Err(e) => return Err(e.into()),
        }
    }
    ensure_dir(out)?;
    write_atomic(&out.join(SWEEP_NAME), csv.as_bytes())?;
    Ok(vec![format!(
        "wrote {} grid points",
        csv.lines().count() - 1
    )])
}

pub fn sweep_manifest(job: Job) -> RunManifest {
    RunManifest::new(job, vec![SWEEP_NAME.to_string()])
}
