//! The six intersection cases. The host drives east along `y = −1.5` and
//! every vehicle holds the speed limit.
//!
//! | case | target |
//! |------|--------|
//! | 1 | northbound at `x = +1.5`, crossing |
//! | 2 | southbound at `x = −1.5`, crossing |
//! | 3 | eastbound in the next lane (`y = −4.5`) |
//! | 4 | westbound oncoming (`y = +1.5`) |
//! | 5 | eastbound ahead in the host's lane, same speed |
//! | 6 | westbound oncoming, starting at the host's end point |
//!
//! Targets in cases 1–4 wait `(target span)/v` before moving, so they reach
//! the box around the time the host does.

use serde::{Deserialize, Serialize};

use super::table::{Cell, Table};
use super::trajectory::Trajectory;
use crate::channel::ChannelParams;
use crate::error::{Error, Result};
use crate::units::{distance, kmh, Point2D};

/// Capacity below this fraction of the run's peak counts as nearly zero.
pub const NEAR_ZERO_FRACTION: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IntersectionLayout {
    pub host_start_m: f64,
    pub host_end_m: f64,
    pub target_start_m: f64,
    pub target_end_m: f64,
    /// Half lane width: lane centres sit at ±offset.
    pub lane_offset_m: f64,
    pub speed_limit_kmh: f64,
}

impl Default for IntersectionLayout {
    fn default() -> Self {
        Self {
            host_start_m: -60.0,
            host_end_m: 40.0,
            target_start_m: -20.0,
            target_end_m: 20.0,
            lane_offset_m: 1.5,
            speed_limit_kmh: 35.0,
        }
    }
}

impl IntersectionLayout {
    pub fn validate(&self) -> Result<()> {
        let ok = self.host_end_m > self.host_start_m
            && self.target_end_m > self.target_start_m
            && self.lane_offset_m > 0.0
            && self.speed_limit_kmh > 0.0;
        if ok {
            Ok(())
        } else {
            Err(Error::Config(format!("invalid intersection layout {self:?}")))
        }
    }

    /// Host and target trajectories for `case` in 1..=6.
    pub fn trajectories(&self, case: u8) -> Result<(Trajectory, Trajectory)> {
        self.validate()?;
        let v = kmh(self.speed_limit_kmh)?;
        let o = self.lane_offset_m;
        let (h0, h1, t0, t1) = (self.host_start_m, self.host_end_m, self.target_start_m, self.target_end_m);
        let p = Point2D::new;
        let host = Trajectory::straight(p(h0, -o), p(h1, -o), v, 0.0)?;
        let wait = (t1 - t0) / v;
        let (a, b, delay) = match case {
            1 => (p(o, t0), p(o, t1), wait),
            2 => (p(-o, t1), p(-o, t0), wait),
            3 => (p(t0, -3.0 * o), p(t1, -3.0 * o), wait),
            4 => (p(t1, o), p(t0, o), wait),
            5 => (p(t0, -o), p(t0 + (h1 - h0), -o), 0.0),
            6 => (p(h1, o), p(h0, o), 0.0),
            _ => return Err(Error::Config(format!("intersection case must be 1..=6, got {case}"))),
        };
        Ok((host, Trajectory::straight(a, b, v, delay)?))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntersectionSample {
    pub t: f64,
    pub distance: f64,
    pub capacity: f64,
    pub near_zero: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntersectionRun {
    pub case: u8,
    pub channel: ChannelParams,
    pub samples: Vec<IntersectionSample>,
    pub peak: f64,
}

impl IntersectionRun {
    /// Distance beyond which capacity is below the near-zero threshold.
    pub fn cutoff_distance(&self) -> f64 {
        let c = &self.channel;
        let snr = (NEAR_ZERO_FRACTION * self.peak / c.bandwidth_hz).exp2() - 1.0;
        (c.p_over_n0 / snr).powf(1.0 / (2.0 * c.alpha))
    }

    pub fn to_table(&self) -> Table {
        let mut t = Table::new(["t_s", "distance_m", "capacity"]);
        t.rows = self
            .samples
            .iter()
            .map(|s| vec![Cell::Num(s.t), Cell::Num(s.distance), Cell::Num(s.capacity)])
            .collect();
        t
    }
}

/// 40 dB, α = 2: puts the near-zero regime inside the intersection.
pub fn intersection_channel() -> ChannelParams {
    ChannelParams::from_db(40.0, 2.0).expect("valid constants")
}

pub fn run_intersection_case(case: u8, dt: f64, channel: ChannelParams) -> Result<IntersectionRun> {
    run_intersection_with(case, dt, channel, &IntersectionLayout::default())
}

pub fn run_intersection_with(
    case: u8,
    dt: f64,
    channel: ChannelParams,
    layout: &IntersectionLayout,
) -> Result<IntersectionRun> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::Config(format!("dt must be positive, got {dt}")));
    }
    let (host, target) = layout.trajectories(case)?;
    let duration = host.end_time().max(target.end_time());
    let steps = (duration / dt + 1e-9).floor() as usize;
    let mut samples = Vec::with_capacity(steps + 1);
    for k in 0..=steps {
        let t = k as f64 * dt;
        let d = distance(host.position_at(t), target.position_at(t))?;
        samples.push(IntersectionSample { t, distance: d, capacity: channel.capacity_at(d)?, near_zero: false });
    }
    let peak = samples.iter().map(|s| s.capacity).fold(f64::NEG_INFINITY, f64::max);
    for s in &mut samples {
        s.near_zero = s.capacity < NEAR_ZERO_FRACTION * peak;
    }
    Ok(IntersectionRun { case, channel, samples, peak })
}
