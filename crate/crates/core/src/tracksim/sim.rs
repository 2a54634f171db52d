use std::io::Write;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::path::{closest_point, interpolate_path, tracking_errors};
use super::tracker::{build_tracker_spec, spatial_window_command, TrackerParams};
use super::{wrap_angle, Pose, TrackError};

/// Forward Euler step of the unicycle model at curvature `kappa`.
pub fn step_kinematics(pose: &Pose, v: f64, kappa: f64, dt: f64) -> Result<Pose, TrackError> {
    if v.is_nan() || v <= 0.0 {
        return Err(TrackError::ForwardOnly(v));
    }
    let d = v * dt;
    Ok(Pose::new(
        pose.x + d * pose.theta.cos(),
        pose.y + d * pose.theta.sin(),
        pose.theta + d * kappa,
    ))
}

/// Odometry noise: the distance error has standard deviation `sigma_d`
/// times the distance travelled in the step, the heading error `sigma_theta`
/// radians per step.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseModel {
    pub sigma_d: f64,
    pub sigma_theta: f64,
}

impl NoiseModel {
    pub const NONE: NoiseModel = NoiseModel {
        sigma_d: 0.0,
        sigma_theta: 0.0,
    };

    pub fn validate(&self) -> Result<(), TrackError> {
        for s in [self.sigma_d, self.sigma_theta] {
            if !(s >= 0.0 && s.is_finite()) {
                return Err(TrackError::Params(format!(
                    "noise level {s} must be finite and >= 0"
                )));
            }
        }
        Ok(())
    }
}

/// Initial pose relative to the first path sample: `offset` mm to the left
/// of the path and `heading` rad counter-clockwise of its tangent.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StartPose {
    #[serde(default)]
    pub offset: f64,
    #[serde(default)]
    pub heading: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow {
    pub t: f64,
    pub truth: Pose,
    pub estimate: Pose,
    pub e_d: f64,
    pub e_theta: f64,
    pub kappa: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceLog {
    pub rows: Vec<TraceRow>,
    /// Whether the run stopped on the final path sample rather than the
    /// step limit.
    pub reached_end: bool,
    pub path_end: (f64, f64),
}

pub const TRACE_HEADER: &str = "t,x,y,theta,x_est,y_est,theta_est,e_d,e_theta,kappa";

impl TraceLog {
    /// Distance from the final true position to the end of the path.
    pub fn final_deviation(&self) -> f64 {
        let last = &self
            .rows
            .last()
            .expect("a trace has at least one row")
            .truth;
        (last.x - self.path_end.0).hypot(last.y - self.path_end.1)
    }

    pub fn max_abs_e_d(&self) -> f64 {
        self.rows.iter().map(|r| r.e_d.abs()).fold(0.0, f64::max)
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "{TRACE_HEADER}")?;
        for r in &self.rows {
            writeln!(
                w,
                "{},{},{},{},{},{},{},{},{},{}",
                r.t,
                r.truth.x,
                r.truth.y,
                r.truth.theta,
                r.estimate.x,
                r.estimate.y,
                r.estimate.theta,
                r.e_d,
                r.e_theta,
                r.kappa
            )?;
        }
        Ok(())
    }
}

/// Runs the closed loop for at most `steps` control periods.
///
/// The controller only sees the estimated pose. Both poses move under the
/// same command; the estimate additionally picks up seeded Gaussian error
/// on distance and heading every step.
pub fn simulate(
    waypoints: &[(f64, f64)],
    start: StartPose,
    params: &TrackerParams,
    noise: NoiseModel,
    seed: u64,
    steps: usize,
) -> Result<TraceLog, TrackError> {
    params.validate()?;
    noise.validate()?;
    let path = interpolate_path(waypoints, params.spacing)?;
    let spec = build_tracker_spec(params);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let (x0, y0) = path.points[0];
    let phi = path.tangent(0);
    let mut truth = Pose::new(
        x0 - start.offset * phi.sin(),
        y0 + start.offset * phi.cos(),
        phi + start.heading,
    );
    let mut estimate = truth;
    let d = params.speed * params.dt;

    let mut rows = Vec::new();
    let mut reached_end = false;
    for k in 0..=steps {
        let idx = closest_point(&path, &estimate);
        let (e_d, e_theta) = tracking_errors(&path, idx, &estimate);
        let kappa = spatial_window_command(&path, &estimate, params, &spec)?;
        rows.push(TraceRow {
            t: k as f64 * params.dt,
            truth,
            estimate,
            e_d,
            e_theta,
            kappa,
        });
        if idx == path.last_index() {
            reached_end = true;
            break;
        }
        if k == steps {
            break;
        }
        truth = step_kinematics(&truth, params.speed, kappa, params.dt)?;
        let z_d: f64 = StandardNormal.sample(&mut rng);
        let z_theta: f64 = StandardNormal.sample(&mut rng);
        let d_est = d * (1.0 + noise.sigma_d * z_d);
        estimate = Pose::new(
            estimate.x + d_est * estimate.theta.cos(),
            estimate.y + d_est * estimate.theta.sin(),
            wrap_angle(estimate.theta + d * kappa + noise.sigma_theta * z_theta),
        );
    }
    Ok(TraceLog {
        rows,
        reached_end,
        path_end: *path.points.last().expect("at least two samples"),
    })
}
