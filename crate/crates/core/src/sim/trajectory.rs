use serde::{Deserialize, Serialize};

use crate::error::{ensure, Result};
use crate::units::Point2D;

/// Piecewise-linear path. The vehicle waits at the first waypoint until
/// `start_delay`, then drives each leg at its own speed and parks at the end.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub waypoints: Vec<Point2D>,
    /// One speed per leg, m/s.
    pub speeds: Vec<f64>,
    pub start_delay: f64,
    pub speed_limit: f64,
}

impl Trajectory {
    pub fn new(waypoints: Vec<Point2D>, speeds: Vec<f64>, start_delay: f64, speed_limit: f64) -> Result<Self> {
        ensure(waypoints.len() >= 2, || "trajectory needs at least two waypoints".to_string())?;
        ensure(speeds.len() == waypoints.len() - 1, || {
            format!("{} legs need {} speeds, got {}", waypoints.len() - 1, waypoints.len() - 1, speeds.len())
        })?;
        ensure(waypoints.iter().all(Point2D::is_finite), || "waypoints must be finite".to_string())?;
        ensure(start_delay >= 0.0, || format!("start delay must be non-negative, got {start_delay}"))?;
        ensure(speeds.iter().all(|&v| v > 0.0 && v <= speed_limit), || {
            format!("leg speeds {speeds:?} must be positive and within the limit {speed_limit}")
        })?;
        Ok(Self { waypoints, speeds, start_delay, speed_limit })
    }

    /// Straight run from `a` to `b` at constant speed.
    pub fn straight(a: Point2D, b: Point2D, speed: f64, start_delay: f64) -> Result<Self> {
        Self::new(vec![a, b], vec![speed], start_delay, speed)
    }

    fn leg_length(&self, i: usize) -> f64 {
        let (a, b) = (self.waypoints[i], self.waypoints[i + 1]);
        (b.x - a.x).hypot(b.y - a.y)
    }

    pub fn length(&self) -> f64 {
        (0..self.speeds.len()).map(|i| self.leg_length(i)).sum()
    }

    /// Time at which the vehicle reaches its last waypoint.
    pub fn end_time(&self) -> f64 {
        self.start_delay + (0..self.speeds.len()).map(|i| self.leg_length(i) / self.speeds[i]).sum::<f64>()
    }

    pub fn position_at(&self, t: f64) -> Point2D {
        let mut clock = t - self.start_delay;
        if clock <= 0.0 {
            return self.waypoints[0];
        }
        for (i, &v) in self.speeds.iter().enumerate() {
            let len = self.leg_length(i);
            let s = clock * v;
            if s < len {
                return self.waypoints[i].lerp(self.waypoints[i + 1], s / len);
            }
            clock -= len / v;
        }
        *self.waypoints.last().expect("validated")
    }
}
