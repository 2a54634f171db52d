use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
}

fn fuzzychip(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fuzzychip"))
        .args(args)
        .env("FUZZYCHIP_LOG", "error")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn small_spec() -> Value {
    json!({
        "in_bits": 8, "out_bits": 10, "alpha_bits": 8, "cons_bits": 8,
        "partitions": [{"mfs": [[0, 0, 0, 128], [0, 128, 128, 255], [128, 255, 255, 255]]}],
        "singletons": [10, 200, 40],
        "and_method": "min", "mode": "standard", "stages": 5, "clock_ns": 10.0
    })
}

fn write_json(dir: &Path, name: &str, v: &Value) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, serde_json::to_string_pretty(v).unwrap()).unwrap();
    p
}

fn dir_files(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .map(|p| {
            (
                p.file_name().unwrap().to_string_lossy().into_owned(),
                fs::read(&p).unwrap(),
            )
        })
        .collect();
    files.sort();
    files
}

#[test]
fn timing_reports_table_i_baseline() {
    let out = fuzzychip(&["flc", "timing", "--spec", s(&data("tableI.json"))]);
    assert!(out.status.success());
    assert_eq!(
        stdout(&out),
        "latency 110 ns\ncycles per sample 16\nsample rate 6.25 MHz\n"
    );
    let out = fuzzychip(&["flc", "timing", "--spec", s(&data("tableI.json")), "--json"]);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["cycles_per_sample"], 16);
}

#[test]
fn validate_exit_codes() {
    let tmp = tempfile::tempdir().unwrap();
    let good = write_json(tmp.path(), "good.json", &small_spec());
    let out = fuzzychip(&["flc", "validate", "--spec", s(&good)]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));

    let mut gapped = small_spec();
    gapped["partitions"][0]["mfs"][1] = json!([140, 150, 150, 160]);
    let bad = write_json(tmp.path(), "gapped.json", &gapped);
    let out = fuzzychip(&["flc", "validate", "--spec", s(&bad)]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stderr(&out).lines().count(), 1);

    let missing = tmp.path().join("nope.json");
    assert_eq!(
        fuzzychip(&["flc", "validate", "--spec", s(&missing)])
            .status
            .code(),
        Some(2)
    );

    let garbage = tmp.path().join("garbage.json");
    fs::write(&garbage, "{ not json").unwrap();
    assert_eq!(
        fuzzychip(&["flc", "timing", "--spec", s(&garbage)])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn eval_is_deterministic() {
    let spec = data("tableI.json");
    let args = [
        "flc",
        "eval",
        "--spec",
        s(&spec),
        "--inputs",
        "100,2000,3000,4095",
    ];
    let a = fuzzychip(&args);
    let b = fuzzychip(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    let keys: Vec<&str> = text.lines().map(|l| l.split(' ').next().unwrap()).collect();
    assert_eq!(keys, ["fixed_code", "fixed", "reference", "difference"]);

    let wrong = fuzzychip(&[
        "flc",
        "eval",
        "--spec",
        s(&data("tableI.json")),
        "--inputs",
        "1,2",
    ]);
    assert_eq!(wrong.status.code(), Some(1));
}

#[test]
fn sweep_covers_the_grid() {
    let tmp = tempfile::tempdir().unwrap();
    let spec = write_json(tmp.path(), "spec.json", &small_spec());
    let out_dir = tmp.path().join("sweep");
    let out = fuzzychip(&["flc", "sweep", "--spec", s(&spec), "--out", s(&out_dir)]);
    assert!(out.status.success(), "{}", stderr(&out));
    let csv = fs::read_to_string(out_dir.join("sweep.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 256);
    assert!(out_dir.join("manifest.json").exists());

    let four = fuzzychip(&[
        "flc",
        "sweep",
        "--spec",
        s(&data("tableI.json")),
        "--out",
        s(&out_dir),
    ]);
    assert_eq!(four.status.code(), Some(1));
}

#[test]
fn ga_with_zero_generations_keeps_initial_population() {
    let tmp = tempfile::tempdir().unwrap();
    let out = fuzzychip(&[
        "ga",
        "--fn",
        "sphere",
        "--max-gen",
        "0",
        "--out",
        s(tmp.path()),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let csv = fs::read_to_string(tmp.path().join("ga-000.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[1].starts_with("0,"));
    let record: Value =
        serde_json::from_str(&fs::read_to_string(tmp.path().join("ga-000.json")).unwrap()).unwrap();
    assert_eq!(record["result"]["generations_run"], 0);
    let best = lines[1].split(',').nth(1).unwrap();
    assert_eq!(record["result"]["best_score"].to_string(), best);
}

#[test]
fn tsp_echoes_dimension() {
    let tmp = tempfile::tempdir().unwrap();
    let out = fuzzychip(&[
        "tsp",
        "--instance",
        s(&data("burma14.tsp")),
        "--config",
        s(&data("tableII.json")),
        "--seeds",
        "7,11,13,17",
        "--out",
        s(tmp.path()),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let record: Value =
        serde_json::from_str(&fs::read_to_string(tmp.path().join("tsp-000.json")).unwrap())
            .unwrap();
    assert_eq!(record["dimension"], 14);
    assert_eq!(record["seeds"]["lfsr"], json!([7, 11, 13, 17]));
    let tour: Vec<usize> = record["tour"]
        .as_str()
        .unwrap()
        .split(',')
        .map(|c| c.parse().unwrap())
        .collect();
    let mut sorted = tour.clone();
    sorted.sort();
    assert_eq!(sorted, (0..14).collect::<Vec<_>>());
    let line = stdout(&out);
    assert!(line.contains("length") && line.contains("tour"), "{line}");
}

#[test]
fn unknown_edge_weight_type_is_reported_verbatim() {
    let tmp = tempfile::tempdir().unwrap();
    let inst = tmp.path().join("att.tsp");
    fs::write(
        &inst,
        "NAME: x\nTYPE: TSP\nDIMENSION: 3\nEDGE_WEIGHT_TYPE: ATT\nNODE_COORD_SECTION\n1 0 0\n2 1 1\n3 2 2\nEOF\n",
    )
    .unwrap();
    let out = fuzzychip(&[
        "tsp",
        "--instance",
        s(&inst),
        "--out",
        s(&tmp.path().join("o")),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(
        stderr(&out).contains("unsupported EDGE_WEIGHT_TYPE ATT"),
        "{}",
        stderr(&out)
    );
    assert!(!tmp.path().join("o").exists());
}

#[test]
fn track_writes_trace_that_regulates() {
    let tmp = tempfile::tempdir().unwrap();
    let out = fuzzychip(&[
        "track",
        "--path",
        s(&data("straight25m.txt")),
        "--config",
        s(&data("tracker_offset.json")),
        "--noise",
        "0,0",
        "--out",
        s(tmp.path()),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let csv = fs::read_to_string(tmp.path().join("track-000.csv")).unwrap();
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let col = header.iter().position(|&h| h == "e_d").unwrap();
    let e_d: Vec<f64> = lines
        .map(|l| l.split(',').nth(col).unwrap().parse().unwrap())
        .collect();
    assert!((e_d[0] + 500.0).abs() < 1e-9);
    let tail = &e_d[e_d.len() - e_d.len() / 5..];
    assert!(tail.iter().all(|e| e.abs() < 50.0));
}

#[test]
fn replay_reproduces_outputs() {
    let tmp = tempfile::tempdir().unwrap();
    let first = tmp.path().join("first");
    let out = fuzzychip(&[
        "track",
        "--path",
        s(&data("spath.txt")),
        "--noise",
        "0.1,0.01",
        "--seeds",
        "1..4",
        "--jobs",
        "3",
        "--out",
        s(&first),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let second = tmp.path().join("second");
    let out = fuzzychip(&[
        "replay",
        "--manifest",
        s(&first.join("manifest.json")),
        "--out",
        s(&second),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert_eq!(dir_files(&first), dir_files(&second));
    assert_eq!(dir_files(&first).len(), 1 + 2 * 3);
}

#[test]
fn bad_arguments_exit_with_two() {
    let tmp = tempfile::tempdir().unwrap();
    assert_eq!(fuzzychip(&["ga", "--fn", "sphere"]).status.code(), Some(2));
    let out = fuzzychip(&[
        "track",
        "--path",
        s(&data("spath.txt")),
        "--noise",
        "x",
        "--out",
        s(tmp.path()),
    ]);
    assert_ne!(out.status.code(), Some(0));
    let out = fuzzychip(&["ga", "--fn", "nosuch", "--out", s(tmp.path())]);
    assert_eq!(out.status.code(), Some(1));
}
