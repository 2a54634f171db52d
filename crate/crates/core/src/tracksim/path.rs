use super::{wrap_angle, Pose, TrackError};

/// Path points at a fixed arc-length spacing along a polyline.
#[derive(Debug, Clone, PartialEq)]
pub struct PathSamples {
    pub points: Vec<(f64, f64)>,
    pub spacing: f64,
}

impl PathSamples {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn last_index(&self) -> usize {
        self.points.len().saturating_sub(1)
    }

    /// Direction of travel at sample `idx`; the final sample reuses the last
    /// segment.
    pub fn tangent(&self, idx: usize) -> f64 {
        let (a, b) = if idx + 1 < self.points.len() {
            (self.points[idx], self.points[idx + 1])
        } else {
            (self.points[idx - 1], self.points[idx])
        };
        (b.1 - a.1).atan2(b.0 - a.0)
    }
}

fn dist(a: (f64, f64), b: (f64, f64)) -> f64 {
    (b.0 - a.0).hypot(b.1 - a.1)
}

/// Walks the polyline and emits a point every `spacing` of arc length,
/// starting at the first waypoint and always ending on the last one.
pub fn interpolate_path(waypoints: &[(f64, f64)], spacing: f64) -> Result<PathSamples, TrackError> {
    if !(spacing > 0.0 && spacing.is_finite()) {
        return Err(TrackError::Spacing(spacing));
    }
    let mut pts: Vec<(f64, f64)> = Vec::with_capacity(waypoints.len());
    for &w in waypoints {
        if !(w.0.is_finite() && w.1.is_finite()) {
            return Err(TrackError::Waypoint {
                line: 0,
                message: format!("non-finite waypoint {w:?}"),
            });
        }
        if pts.last() != Some(&w) {
            pts.push(w);
        }
    }
    if pts.len() < 2 {
        return Err(TrackError::TooFewWaypoints);
    }
    let mut cumulative = vec![0.0];
    for pair in pts.windows(2) {
        cumulative.push(cumulative.last().unwrap() + dist(pair[0], pair[1]));
    }
    let total = *cumulative.last().unwrap();
    let eps = 1e-9 * total.max(1.0);

    let mut out = Vec::new();
    let mut seg = 0;
    let mut k = 0u64;
    loop {
        let s = k as f64 * spacing;
        if s >= total - eps {
            break;
        }
        while cumulative[seg + 1] < s {
            seg += 1;
        }
        let (a, b) = (pts[seg], pts[seg + 1]);
        let t = (s - cumulative[seg]) / (cumulative[seg + 1] - cumulative[seg]);
        out.push((a.0 + t * (b.0 - a.0), a.1 + t * (b.1 - a.1)));
        k += 1;
    }
    out.push(*pts.last().unwrap());
    Ok(PathSamples {
        points: out,
        spacing,
    })
}

/// Index of the sample nearest to the pose; ties go to the lower index.
pub fn closest_point(path: &PathSamples, pose: &Pose) -> usize {
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for (i, &p) in path.points.iter().enumerate() {
        let d = (p.0 - pose.x).powi(2) + (p.1 - pose.y).powi(2);
        if d < best_d {
            best = i;
            best_d = d;
        }
    }
    best
}

/// Lateral offset and heading error of `pose` relative to sample `idx`.
///
/// `e_d` is positive when the path point lies to the robot's left;
/// `e_theta` is the path tangent minus the pose heading.
pub fn tracking_errors(path: &PathSamples, idx: usize, pose: &Pose) -> (f64, f64) {
    let phi = path.tangent(idx);
    let p = path.points[idx];
    let e_d = (p.0 - pose.x) * -phi.sin() + (p.1 - pose.y) * phi.cos();
    (e_d, wrap_angle(phi - pose.theta))
}

/// Parses one "x y" pair per line; blank lines and `#` comments are skipped.
pub fn parse_waypoints(text: &str) -> Result<Vec<(f64, f64)>, TrackError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let bad = |message: String| TrackError::Waypoint {
            line: i + 1,
            message,
        };
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(bad(format!("expected \"x y\", found {line:?}")));
        }
        let x: f64 = fields[0]
            .parse()
            .map_err(|_| bad(format!("bad x {:?}", fields[0])))?;
        let y: f64 = fields[1]
            .parse()
            .map_err(|_| bad(format!("bad y {:?}", fields[1])))?;
        out.push((x, y));
    }
    Ok(out)
}
