//! Braking distance, ACC safety distance, and the speed-distance coupling that
//! ties host velocity to the legitimate link length.

use crate::error::{ensure, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BrakingProfile {
    /// Initial velocity, m/s.
    pub v0: f64,
    /// Response period, s.
    pub t_a: f64,
    /// Braking clearance period, s.
    pub t_b: f64,
    /// Braking force application period, s.
    pub t_c: f64,
    /// Maximum deceleration, m/s².
    pub a_max: f64,
}

/// Host/target pair under adaptive cruise control.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AccPair {
    pub v1: f64,
    pub v2: f64,
    pub a1: f64,
    pub a2: f64,
    pub tau: f64,
}

pub fn braking_distance(p: &BrakingProfile) -> Result<f64> {
    ensure(p.a_max > 0.0, || format!("maximum deceleration must be positive, got {}", p.a_max))?;
    ensure(p.v0 >= 0.0, || format!("initial velocity must be non-negative, got {}", p.v0))?;
    ensure(p.t_a >= 0.0 && p.t_b >= 0.0 && p.t_c >= 0.0, || {
        format!("braking periods must be non-negative, got {}/{}/{}", p.t_a, p.t_b, p.t_c)
    })?;
    Ok(p.v0 * (p.t_a + p.t_b + p.t_c / 2.0) + p.v0 * p.v0 / (2.0 * p.a_max))
}

/// `v1·τ + v1²/(2a1) − v2²/(2a2)`. Negative when the target brakes much
/// harder than the host; left to the caller.
pub fn safety_distance(p: &AccPair) -> Result<f64> {
    ensure(p.a1 > 0.0 && p.a2 > 0.0, || {
        format!("decelerations must be positive, got {} and {}", p.a1, p.a2)
    })?;
    ensure(p.tau > 0.0, || format!("ACC constant must be positive, got {}", p.tau))?;
    ensure(p.v1 >= 0.0 && p.v2 >= 0.0, || {
        format!("velocities must be non-negative, got {} and {}", p.v1, p.v2)
    })?;
    // Quadratic terms grouped so matched host/target inputs cancel exactly.
    Ok(p.v1 * p.tau + (p.v1 * p.v1 / (2.0 * p.a1) - p.v2 * p.v2 / (2.0 * p.a2)))
}

/// Legitimate-link distance `D = v·τ`.
pub fn coupled_distance(v: f64, tau: f64) -> Result<f64> {
    ensure(v >= 0.0, || format!("velocity must be non-negative, got {v}"))?;
    ensure(tau > 0.0, || format!("ACC constant must be positive, got {tau}"))?;
    Ok(v * tau)
}
