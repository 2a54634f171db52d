use std::f64::consts::{FRAC_PI_4, PI};

use fuzzychip::flc::validate_spec;
use fuzzychip::tracksim::{
    build_tracker_spec, closest_point, interpolate_path, parse_waypoints, simulate,
    tracking_errors, NoiseModel, PathSamples, Pose, StartPose, TraceLog, TrackerParams,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn data(name: &str) -> Vec<(f64, f64)> {
    let path = format!("{}/../../data/{name}", env!("CARGO_MANIFEST_DIR"));
    parse_waypoints(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn run(waypoints: &[(f64, f64)], start: StartPose, noise: NoiseModel, seed: u64) -> TraceLog {
    simulate(
        waypoints,
        start,
        &TrackerParams::default(),
        noise,
        seed,
        100_000,
    )
    .unwrap()
}

fn tail_max(log: &TraceLog, fraction: f64) -> f64 {
    let n = log.rows.len();
    let from = n - (n as f64 * fraction).ceil() as usize;
    log.rows[from..]
        .iter()
        .map(|r| r.e_d.abs())
        .fold(0.0, f64::max)
}

fn segment_residual(a: (f64, f64), b: (f64, f64), p: (f64, f64)) -> f64 {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len2 = dx * dx + dy * dy;
    let t = (((p.0 - a.0) * dx + (p.1 - a.1) * dy) / len2).clamp(0.0, 1.0);
    (a.0 + t * dx - p.0).hypot(a.1 + t * dy - p.1)
}

fn on_polyline(waypoints: &[(f64, f64)], p: (f64, f64)) -> f64 {
    waypoints
        .windows(2)
        .map(|w| segment_residual(w[0], w[1], p))
        .fold(f64::INFINITY, f64::min)
}

#[test]
fn straight_path_converges_from_offset() {
    let log = run(
        &data("straight25m.txt"),
        StartPose {
            offset: 500.0,
            heading: 0.0,
        },
        NoiseModel::NONE,
        0,
    );
    assert!(log.reached_end);
    assert!((log.rows[0].e_d + 500.0).abs() < 1e-9);
    assert!(tail_max(&log, 0.2) < 50.0, "{}", tail_max(&log, 0.2));
}

#[test]
fn s_path_stays_within_spacing() {
    let log = run(
        &data("spath.txt"),
        StartPose::default(),
        NoiseModel::NONE,
        0,
    );
    assert!(log.reached_end);
    assert!(log.max_abs_e_d() < TrackerParams::default().spacing);
}

#[test]
fn commands_respect_curvature_limit() {
    let kappa_max = TrackerParams::default().kappa_max;
    for (name, offset, noise) in [
        (
            "straight25m.txt",
            900.0,
            NoiseModel {
                sigma_d: 0.1,
                sigma_theta: 0.02,
            },
        ),
        (
            "spath.txt",
            -1500.0,
            NoiseModel {
                sigma_d: 0.0,
                sigma_theta: 0.05,
            },
        ),
    ] {
        let log = run(
            &data(name),
            StartPose {
                offset,
                heading: 1.0,
            },
            noise,
            3,
        );
        assert!(log.rows.iter().all(|r| r.kappa.abs() <= kappa_max));
        // large errors saturate the surface
        assert!(log.rows.iter().any(|r| r.kappa.abs() > 0.5 * kappa_max));
    }
}

#[test]
fn same_seed_same_trace() {
    let noise = NoiseModel {
        sigma_d: 0.05,
        sigma_theta: 0.01,
    };
    let a = run(&data("spath.txt"), StartPose::default(), noise, 42);
    let b = run(&data("spath.txt"), StartPose::default(), noise, 42);
    assert_eq!(a, b);
    let c = run(&data("spath.txt"), StartPose::default(), noise, 43);
    assert_ne!(a, c);
}

#[test]
fn final_deviation_grows_with_distance_noise() {
    let s = data("spath.txt");
    let medians: Vec<f64> = [0.05, 0.1, 0.2, 0.4]
        .iter()
        .map(|&sigma_d| {
            let mut dev: Vec<f64> = (0..20)
                .map(|seed| {
                    run(
                        &s,
                        StartPose::default(),
                        NoiseModel {
                            sigma_d,
                            sigma_theta: 0.0,
                        },
                        seed,
                    )
                    .final_deviation()
                })
                .collect();
            dev.sort_by(f64::total_cmp);
            (dev[9] + dev[10]) / 2.0
        })
        .collect();
    assert!(medians.windows(2).all(|w| w[0] <= w[1]), "{medians:?}");
}

#[test]
fn regulation_from_random_starts() {
    let params = TrackerParams::default();
    let path = [(0.0, 0.0), (40_000.0, 0.0)];
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..24 {
        let magnitude = rng.random_range(250.0..=params.lateral_range / 2.0);
        let offset = if rng.random_bool(0.5) {
            magnitude
        } else {
            -magnitude
        };
        let heading = rng.random_range(-FRAC_PI_4..=FRAC_PI_4);
        let log = simulate(
            &path,
            StartPose { offset, heading },
            &params,
            NoiseModel::NONE,
            0,
            100_000,
        )
        .unwrap();
        let initial = log.rows[0].e_d.abs();
        assert!(log.rows.iter().any(|r| r.e_d.abs() < 0.1 * initial));
        // no growth: the second half of the run stays below the first
        let half = log.rows.len() / 2;
        let peak = |rows: &[fuzzychip::tracksim::TraceRow]| {
            rows.iter().map(|r| r.e_d.abs()).fold(0.0, f64::max)
        };
        assert!(
            peak(&log.rows[half..]) <= peak(&log.rows[..half]),
            "offset {offset} heading {heading}"
        );
        assert!(
            tail_max(&log, 0.2) < 0.1 * initial,
            "offset {offset} heading {heading}"
        );
    }
}

#[test]
fn tracker_spec_is_valid_for_other_gains() {
    for (g_d, g_theta) in [(0.6, 0.4), (1.0, 1.0), (0.2, 0.9)] {
        let spec = build_tracker_spec(&TrackerParams {
            g_d,
            g_theta,
            ..TrackerParams::default()
        });
        assert!(validate_spec(&spec).is_ok());
    }
}

fn linear_scan(path: &PathSamples, pose: &Pose) -> usize {
    let d: Vec<f64> = path
        .points
        .iter()
        .map(|p| (p.0 - pose.x).hypot(p.1 - pose.y))
        .collect();
    let min = d.iter().copied().fold(f64::INFINITY, f64::min);
    d.iter().position(|&v| v == min).unwrap()
}

proptest! {
    #[test]
    fn interpolated_points_lie_on_polyline(
        waypoints in prop::collection::vec((-5000.0..5000.0f64, -5000.0..5000.0f64), 2..8),
        spacing in 10.0..800.0f64,
    ) {
        let Ok(path) = interpolate_path(&waypoints, spacing) else {
            return Ok(());
        };
        prop_assert_eq!(path.points[0], waypoints[0]);
        prop_assert_eq!(*path.points.last().unwrap(), *waypoints.last().unwrap());
        for &p in &path.points {
            prop_assert!(on_polyline(&waypoints, p) < 1e-6);
        }
        // chords never exceed the arc-length spacing
        for w in path.points.windows(2) {
            prop_assert!((w[1].0 - w[0].0).hypot(w[1].1 - w[0].1) <= spacing + 1e-6);
        }
    }

    #[test]
    fn straight_samples_are_evenly_spaced(length in 100.0..20_000.0f64, angle in -PI..PI, spacing in 10.0..500.0f64) {
        let end = (length * angle.cos(), length * angle.sin());
        let path = interpolate_path(&[(0.0, 0.0), end], spacing).unwrap();
        let gaps: Vec<f64> = path.points.windows(2).map(|w| (w[1].0 - w[0].0).hypot(w[1].1 - w[0].1)).collect();
        for g in &gaps[..gaps.len() - 1] {
            prop_assert!((g - spacing).abs() < 0.5);
        }
        prop_assert!(*gaps.last().unwrap() <= spacing + 1e-6);
    }

    #[test]
    fn closest_point_matches_scan(x in -3000.0..3000.0f64, y in -3000.0..3000.0f64) {
        let path = interpolate_path(&[(0.0, 0.0), (1000.0, 500.0), (-800.0, 1200.0)], 90.0).unwrap();
        let pose = Pose::new(x, y, 0.0);
        prop_assert_eq!(closest_point(&path, &pose), linear_scan(&path, &pose));
    }

    #[test]
    fn on_path_aligned_pose_has_zero_error(k in 0usize..10) {
        let path = interpolate_path(&[(0.0, 0.0), (700.0, 700.0)], 100.0).unwrap();
        let p = path.points[k];
        let (e_d, e_t) = tracking_errors(&path, k, &Pose::new(p.0, p.1, PI / 4.0));
        prop_assert!(e_d.abs() < 1e-9 && e_t.abs() < 1e-12);
    }
}
