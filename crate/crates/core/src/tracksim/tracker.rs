use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::fixedq::{max_code, DomainMap, FixedWord};
use crate::flc::{infer, AndMethod, FlcSpec, InputPartition, Schedule};

use super::path::{closest_point, tracking_errors, PathSamples};
use super::{Pose, TrackError};

pub const TRACKER_IN_BITS: u8 = 12;
pub const TRACKER_OUT_BITS: u8 = 12;
pub const TRACKER_ALPHA_BITS: u8 = 8;
pub const TRACKER_CONS_BITS: u8 = 8;
pub const TRACKER_MFS: usize = 9;

fn default_lateral_range() -> f64 {
    1000.0
}
fn default_kappa_max() -> f64 {
    0.006
}
fn default_g_d() -> f64 {
    0.6
}
fn default_g_theta() -> f64 {
    0.4
}
fn default_window() -> usize {
    3
}
fn default_speed() -> f64 {
    300.0
}
fn default_dt() -> f64 {
    0.1
}
fn default_spacing() -> f64 {
    100.0
}

/// Tracker geometry and loop settings. Lengths in mm, curvature in 1/mm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrackerParams {
    /// Half-range `D` of the lateral-error universe.
    #[serde(default = "default_lateral_range")]
    pub lateral_range: f64,
    #[serde(default = "default_kappa_max")]
    pub kappa_max: f64,
    #[serde(default = "default_g_d")]
    pub g_d: f64,
    #[serde(default = "default_g_theta")]
    pub g_theta: f64,
    /// Number of consecutive path samples averaged per command.
    #[serde(default = "default_window")]
    pub window: usize,
    /// Forward speed in mm/s.
    #[serde(default = "default_speed")]
    pub speed: f64,
    #[serde(default = "default_dt")]
    pub dt: f64,
    #[serde(default = "default_spacing")]
    pub spacing: f64,
}

impl Default for TrackerParams {
    fn default() -> Self {
        Self {
            lateral_range: default_lateral_range(),
            kappa_max: default_kappa_max(),
            g_d: default_g_d(),
            g_theta: default_g_theta(),
            window: default_window(),
            speed: default_speed(),
            dt: default_dt(),
            spacing: default_spacing(),
        }
    }
}

impl TrackerParams {
    pub fn validate(&self) -> Result<(), TrackError> {
        let bad = |m: &str| Err(TrackError::Params(m.to_string()));
        let positive = |v: f64| v > 0.0 && v.is_finite();
        if !positive(self.lateral_range) {
            return bad("lateral_range must be positive");
        }
        if !positive(self.kappa_max) {
            return bad("kappa_max must be positive");
        }
        if !(self.g_d.is_finite() && self.g_theta.is_finite()) {
            return bad("gains must be finite");
        }
        if self.window == 0 {
            return bad("window must be at least 1");
        }
        if !positive(self.speed) {
            return Err(TrackError::ForwardOnly(self.speed));
        }
        if !positive(self.dt) {
            return bad("dt must be positive");
        }
        if !positive(self.spacing) {
            return Err(TrackError::Spacing(self.spacing));
        }
        Ok(())
    }

    pub fn lateral_map(&self) -> DomainMap {
        DomainMap::new(-self.lateral_range, self.lateral_range, TRACKER_IN_BITS)
            .expect("validated range")
    }

    pub fn heading_map(&self) -> DomainMap {
        DomainMap::new(-PI, PI, TRACKER_IN_BITS).expect("fixed range")
    }
}

/// Normalized steering map whose middle code is exactly zero: code
/// `2^(b-1) + k` stands for `k / (2^(b-1) - 1)`.
pub fn centered_map(bits: u8) -> DomainMap {
    let half = f64::from(1u32 << (bits - 1));
    let unit = half - 1.0;
    DomainMap::new(-half / unit, (half - 1.0) / unit, bits).expect("bits in range")
}

/// Peak position of set `i` lifted to `[-1, 1]`.
pub fn peak_level(i: usize) -> f64 {
    let mid = (TRACKER_MFS / 2) as f64;
    (i as f64 - mid) / mid
}

/// Nine uniform triangles per input and an antisymmetric 81-rule surface
/// `-(g_d * u_i + g_theta * u_j)`.
pub fn build_tracker_spec(params: &TrackerParams) -> FlcSpec {
    let map = centered_map(TRACKER_CONS_BITS);
    let mut singletons = vec![0; TRACKER_MFS * TRACKER_MFS];
    for j in 0..TRACKER_MFS {
        for i in 0..TRACKER_MFS {
            let v = -(params.g_d * peak_level(i) + params.g_theta * peak_level(j));
            singletons[i + TRACKER_MFS * j] = map.quantize(v.clamp(-1.0, 1.0)).value();
        }
    }
    FlcSpec {
        in_bits: TRACKER_IN_BITS,
        out_bits: TRACKER_OUT_BITS,
        alpha_bits: TRACKER_ALPHA_BITS,
        cons_bits: TRACKER_CONS_BITS,
        partitions: vec![InputPartition::uniform_triangular(TRACKER_MFS, TRACKER_IN_BITS); 2],
        singletons,
        and_method: AndMethod::Min,
        mode: Schedule::Standard,
        stages: 9,
        clock_ns: 14.085,
    }
}

/// One FLC evaluation: the commanded curvature for a pair of errors.
///
/// A positive surface level steers right, so the output is negated on the
/// way to curvature.
pub fn command_for_errors(
    e_d: f64,
    e_theta: f64,
    params: &TrackerParams,
    spec: &FlcSpec,
) -> Result<f64, TrackError> {
    let inputs = [
        params.lateral_map().quantize(e_d),
        params.heading_map().quantize(e_theta),
    ];
    let out = infer(spec, &inputs)?;
    Ok(-params.kappa_max * output_level(out, spec.cons_bits))
}

/// Output code as a level in `[-1, 1]`, read on the consequent scale
/// before the output shift.
pub fn output_level(out: FixedWord, cons_bits: u8) -> f64 {
    debug_assert!(out.value() <= max_code(out.bits()) && cons_bits <= out.bits());
    let shift = f64::from(1u32 << (out.bits() - cons_bits));
    let half = f64::from(1u32 << (cons_bits - 1));
    ((f64::from(out.value()) / shift - half) / (half - 1.0)).clamp(-1.0, 1.0)
}

/// Mean command over the `window` samples from the closest one onward.
pub fn spatial_window_command(
    path: &PathSamples,
    pose_est: &Pose,
    params: &TrackerParams,
    spec: &FlcSpec,
) -> Result<f64, TrackError> {
    let start = closest_point(path, pose_est);
    let end = (start + params.window).min(path.len());
    let mut sum = 0.0;
    for idx in start..end {
        let (e_d, e_theta) = tracking_errors(path, idx, pose_est);
        sum += command_for_errors(e_d, e_theta, params, spec)?;
    }
    let mean = sum / (end - start) as f64;
    Ok(mean.clamp(-params.kappa_max, params.kappa_max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flc::validate_spec;
    use crate::tracksim::interpolate_path;

    #[test]
    fn centered_map_zero_is_mid_code() {
        let m = centered_map(8);
        assert_eq!(m.quantize(0.0).value(), 128);
        assert_eq!(m.quantize(1.0).value(), 255);
        assert_eq!(m.quantize(-1.0).value(), 1);
        assert_eq!(m.dequantize(FixedWord::new(128, 8).unwrap()), 0.0);
        assert_eq!(output_level(FixedWord::new(128 << 4, 12).unwrap(), 8), 0.0);
        assert_eq!(output_level(FixedWord::new(255 << 4, 12).unwrap(), 8), 1.0);
        assert_eq!(output_level(FixedWord::new(1 << 4, 12).unwrap(), 8), -1.0);
    }

    #[test]
    fn tracker_spec_shape() {
        let spec = build_tracker_spec(&TrackerParams::default());
        assert!(validate_spec(&spec).is_ok());
        assert_eq!(spec.singletons.len(), 81);
        assert_eq!(spec.singletons[4 + 9 * 4], 128);
        for i in 0..9 {
            for j in 0..9 {
                let a = spec.singletons[i + 9 * j];
                let b = spec.singletons[(8 - i) + 9 * (8 - j)];
                assert!((a + b).abs_diff(256) <= 1, "({i},{j}): {a} + {b}");
            }
        }
        // corner: -(0.6 + 0.4) = -1
        assert_eq!(spec.singletons[80], 1);
        assert_eq!(spec.singletons[0], 255);
    }

    #[test]
    fn zero_errors_give_zero_curvature() {
        let params = TrackerParams::default();
        let spec = build_tracker_spec(&params);
        assert_eq!(command_for_errors(0.0, 0.0, &params, &spec).unwrap(), 0.0);
        let path = interpolate_path(&[(0.0, 0.0), (5000.0, 0.0)], 100.0).unwrap();
        for w in 1..=5 {
            let p = TrackerParams {
                window: w,
                ..params.clone()
            };
            let k = spatial_window_command(&path, &Pose::new(1234.0, 0.0, 0.0), &p, &spec).unwrap();
            assert_eq!(k, 0.0);
        }
    }

    #[test]
    fn steering_signs() {
        let params = TrackerParams::default();
        let spec = build_tracker_spec(&params);
        // path on the robot's right: turn right
        assert!(command_for_errors(-300.0, 0.0, &params, &spec).unwrap() < 0.0);
        // path heading counter-clockwise of the robot: turn left
        assert!(command_for_errors(0.0, 0.5, &params, &spec).unwrap() > 0.0);
    }

    #[test]
    fn window_is_mean_of_single_commands() {
        let params = TrackerParams::default();
        let spec = build_tracker_spec(&params);
        let path = interpolate_path(&[(0.0, 0.0), (400.0, 0.0), (400.0, 600.0)], 100.0).unwrap();
        let pose = Pose::new(290.0, -60.0, 0.3);
        let idx = closest_point(&path, &pose);
        let single = |k: usize| {
            let (e_d, e_t) = tracking_errors(&path, k, &pose);
            command_for_errors(e_d, e_t, &params, &spec).unwrap()
        };
        let w1 = TrackerParams {
            window: 1,
            ..params.clone()
        };
        assert_eq!(
            spatial_window_command(&path, &pose, &w1, &spec).unwrap(),
            single(idx)
        );
        let hand = (single(idx) + single(idx + 1) + single(idx + 2)) / 3.0;
        let w3 = spatial_window_command(&path, &pose, &params, &spec).unwrap();
        assert!((w3 - hand).abs() < 1e-15);
        // a window past the end uses what remains
        let end = Pose::new(400.0, 600.0, 1.5);
        let wide = TrackerParams {
            window: 10,
            ..params
        };
        let last = path.last_index();
        let (e_d, e_t) = tracking_errors(&path, last, &end);
        let k = spatial_window_command(&path, &end, &wide, &spec).unwrap();
        assert_eq!(k, command_for_errors(e_d, e_t, &wide, &spec).unwrap());
    }

    #[test]
    fn params_validation() {
        assert!(TrackerParams::default().validate().is_ok());
        let p = TrackerParams {
            speed: 0.0,
            ..TrackerParams::default()
        };
        assert_eq!(p.validate(), Err(TrackError::ForwardOnly(0.0)));
        let p = TrackerParams {
            window: 0,
            ..TrackerParams::default()
        };
        assert!(matches!(p.validate(), Err(TrackError::Params(_))));
    }
}
