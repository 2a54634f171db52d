//! Path tracking in simulation: fixed-spacing path samples, lateral and
//! heading errors, a two-input fuzzy tracker with a spatial window, unicycle
//! kinematics and an odometry noise model.

mod path;
mod sim;
mod tracker;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::flc::FlcError;

pub use path::{closest_point, interpolate_path, parse_waypoints, tracking_errors, PathSamples};
pub use sim::{simulate, step_kinematics, NoiseModel, StartPose, TraceLog, TraceRow, TRACE_HEADER};
pub use tracker::{
    build_tracker_spec, centered_map, command_for_errors, output_level, peak_level,
    spatial_window_command, TrackerParams, TRACKER_ALPHA_BITS, TRACKER_CONS_BITS, TRACKER_IN_BITS,
    TRACKER_MFS, TRACKER_OUT_BITS,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TrackError {
    #[error("a path needs at least two distinct waypoints")]
    TooFewWaypoints,
    #[error("spacing {0} must be positive")]
    Spacing(f64),
    #[error("speed {0} is not forward motion")]
    ForwardOnly(f64),
    #[error("waypoint line {line}: {message}")]
    Waypoint { line: usize, message: String },
    #[error("tracker parameters: {0}")]
    Params(String),
    #[error(transparent)]
    Flc(#[from] FlcError),
}

/// Maps an angle into `(-pi, pi]`.
pub fn wrap_angle(a: f64) -> f64 {
    let mut r = a.rem_euclid(2.0 * PI);
    if r > PI {
        r -= 2.0 * PI;
    }
    r
}

/// Planar pose in mm and radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pose {
    pub x: f64,
    pub y: f64,
    pub theta: f64,
}

impl Pose {
    pub fn new(x: f64, y: f64, theta: f64) -> Self {
        Self {
            x,
            y,
            theta: wrap_angle(theta),
        }
    }
}
