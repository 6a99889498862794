//! Closed-form secrecy capacity for the deterministic geometries: highway
//! car-following, urban intersection with a fixed or co-moving eavesdropper,
//! and single cooperative relay.
//!
//! Distances enter as `d^(2α)` denominators, matching `|h|² = d^(−2α)`.
//! Results are bits/s/Hz (unit bandwidth) except for the relay form, which
//! carries its own bandwidth.

use serde::{Deserialize, Serialize};

use crate::channel::{log2_1p, path_loss_coeff_sq, ChannelParams};
use crate::error::{ensure, Error, Result};
use crate::kinematics::coupled_distance;
use crate::units::{kmh, Decibel};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HighwayScenario {
    pub params: ChannelParams,
    /// Host–eavesdropper distance, m.
    pub r: f64,
    /// Angle between the two eavesdropper sight lines, rad. Only used by
    /// [`highway_secrecy_angular`]; when speed and τ are known, `D = vτ` wins.
    pub theta: f64,
    /// Host speed, m/s.
    pub v: f64,
    /// ACC constant, s.
    pub tau: f64,
}

impl HighwayScenario {
    pub fn legitimate_distance(&self) -> Result<f64> {
        coupled_distance(self.v, self.tau)
    }
}

fn pair_by_distance(params: &ChannelParams, d_ab: f64, d_ae: f64) -> Result<f64> {
    let snr_ab = params.p_over_n0 * path_loss_coeff_sq(d_ab, params.alpha)?;
    let snr_ae = params.p_over_n0 * path_loss_coeff_sq(d_ae, params.alpha)?;
    Ok(log2_1p(snr_ab) - log2_1p(snr_ae))
}

/// Highway model with `D = vτ`.
pub fn highway_secrecy(s: &HighwayScenario) -> Result<f64> {
    ensure(s.r > 0.0, || format!("eavesdropper distance must be positive, got {}", s.r))?;
    let d = s.legitimate_distance()?;
    if d == 0.0 {
        return Err(Error::Singularity(format!(
            "v·τ = 0 (v={}, τ={}) puts the target on top of the host",
            s.v, s.tau
        )));
    }
    pair_by_distance(&s.params, d, s.r)
}

/// Highway model with the angular distance `D = rθ`.
pub fn highway_secrecy_angular(s: &HighwayScenario) -> Result<f64> {
    ensure(s.r > 0.0 && s.theta > 0.0, || {
        format!("r and θ must be positive, got r={} θ={}", s.r, s.theta)
    })?;
    pair_by_distance(&s.params, s.r * s.theta, s.r)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EavesdropperMotion {
    Fixed,
    Moving,
}

/// Host at the southwest corner of an intersection, target approaching on the
/// crossing road, both at the speed limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UrbanScenario {
    pub params: ChannelParams,
    /// Lane width `W`, m.
    pub lane_width: f64,
    /// Speed limit `V_L`, m/s.
    pub v_limit: f64,
    /// Snapshot time, s.
    pub t: f64,
    /// Shortest distance from the intersection to the eavesdropper, m.
    pub r0: f64,
    pub eavesdropper: EavesdropperMotion,
}

impl UrbanScenario {
    fn validate(&self) -> Result<()> {
        ensure(self.lane_width > 0.0, || format!("lane width must be positive, got {}", self.lane_width))?;
        ensure(self.v_limit >= 0.0, || format!("speed limit must be non-negative, got {}", self.v_limit))?;
        ensure(self.t >= 0.0, || format!("time must be non-negative, got {}", self.t))?;
        ensure(self.r0 > 0.0, || format!("R0 must be positive, got {}", self.r0))
    }

    /// Host–target distance `R_1 = sqrt(S_T² + S_H²)`.
    pub fn host_target_distance(&self) -> f64 {
        let (w, x) = (self.lane_width, self.v_limit * self.t);
        (5.0 * w * w + 2.0 * w * x + 2.0 * x * x).sqrt()
    }

    /// Linearized host–eavesdropper distance for a fixed eavesdropper.
    pub fn fixed_eavesdropper_distance(&self) -> f64 {
        self.r0 + 2.0 * self.lane_width - self.v_limit * self.t
    }

    /// Host–eavesdropper distance for an eavesdropper co-moving with the target.
    pub fn moving_eavesdropper_distance(&self) -> f64 {
        let (w, r0, x) = (self.lane_width, self.r0, self.v_limit * self.t);
        (w * w + r0 * r0 - 2.0 * (w + r0) * x + 2.0 * x * x).sqrt()
    }
}

pub fn urban_fixed_secrecy(s: &UrbanScenario) -> Result<f64> {
    s.validate()?;
    let r2 = s.fixed_eavesdropper_distance();
    if r2 <= 0.0 {
        return Err(Error::Geometry(format!(
            "fixed-eavesdropper distance R2 = {r2} m is not positive at t = {} s",
            s.t
        )));
    }
    pair_by_distance(&s.params, s.host_target_distance(), r2)
}

pub fn urban_moving_secrecy(s: &UrbanScenario) -> Result<f64> {
    s.validate()?;
    pair_by_distance(&s.params, s.host_target_distance(), s.moving_eavesdropper_distance())
}

/// Dispatches on the scenario's eavesdropper motion.
pub fn urban_secrecy(s: &UrbanScenario) -> Result<f64> {
    match s.eavesdropper {
        EavesdropperMotion::Fixed => urban_fixed_secrecy(s),
        EavesdropperMotion::Moving => urban_moving_secrecy(s),
    }
}

/// One relay between host A and target B; the relay's transmission acts as
/// interference at both B and the eavesdropper E.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelayScenario {
    pub p_a: f64,
    pub p_r: f64,
    pub h_ab_sq: f64,
    pub h_rb_sq: f64,
    pub h_ae_sq: f64,
    pub h_re_sq: f64,
    pub sigma_b_sq: f64,
    pub sigma_e_sq: f64,
    pub bandwidth_hz: f64,
}

impl RelayScenario {
    fn validate(&self) -> Result<()> {
        ensure(self.p_a >= 0.0 && self.p_r >= 0.0, || {
            format!("powers must be non-negative, got P_A={} P_R={}", self.p_a, self.p_r)
        })?;
        ensure(self.sigma_b_sq > 0.0 && self.sigma_e_sq > 0.0, || {
            format!("noise powers must be positive, got {} and {}", self.sigma_b_sq, self.sigma_e_sq)
        })?;
        ensure(
            [self.h_ab_sq, self.h_rb_sq, self.h_ae_sq, self.h_re_sq].iter().all(|&h| h >= 0.0),
            || "channel gains must be non-negative".to_string(),
        )?;
        ensure(self.bandwidth_hz > 0.0, || format!("bandwidth must be positive, got {}", self.bandwidth_hz))
    }

    pub fn without_relay(&self) -> RelayScenario {
        RelayScenario { p_r: 0.0, ..*self }
    }
}

pub fn relay_secrecy(s: &RelayScenario) -> Result<f64> {
    s.validate()?;
    let legit = s.p_a * s.h_ab_sq / (s.p_r * s.h_rb_sq + s.sigma_b_sq);
    let wiretap = s.p_a * s.h_ae_sq / (s.p_r * s.h_re_sq + s.sigma_e_sq);
    Ok(s.bandwidth_hz * (log2_1p(legit) - log2_1p(wiretap)))
}

/// Relay form with `P_R = 0`.
pub fn direct_secrecy(s: &RelayScenario) -> Result<f64> {
    relay_secrecy(&s.without_relay())
}

/// Serializable scenario description in configuration units (dB, km/h).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ScenarioConfig {
    Highway(HighwayConfig),
    UrbanFixed(UrbanConfig),
    UrbanMoving(UrbanConfig),
    Relay(RelayConfig),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HighwayConfig {
    pub p_over_n0_db: f64,
    pub alpha: f64,
    #[serde(default = "default_r")]
    pub r_m: f64,
    pub v_kmh: f64,
    pub tau_s: f64,
    #[serde(default = "default_theta")]
    pub theta_rad: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UrbanConfig {
    pub p_over_n0_db: f64,
    /// Not stated for the intersection figures; 2.0 is this crate's default.
    #[serde(default = "default_urban_alpha")]
    pub alpha: f64,
    #[serde(default = "default_lane_width")]
    pub lane_width_m: f64,
    pub v_limit_kmh: f64,
    #[serde(default = "default_snapshot")]
    pub t_s: f64,
    pub r0_m: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelayConfig {
    pub p_a: f64,
    pub p_r: f64,
    pub h_ab: f64,
    pub h_rb: f64,
    pub h_ae: f64,
    pub h_re: f64,
    #[serde(default = "one")]
    pub sigma_b_sq: f64,
    #[serde(default = "one")]
    pub sigma_e_sq: f64,
    #[serde(default = "one")]
    pub bandwidth_hz: f64,
}

fn default_r() -> f64 {
    1000.0
}
fn default_theta() -> f64 {
    0.1
}
fn default_urban_alpha() -> f64 {
    2.0
}
fn default_lane_width() -> f64 {
    3.0
}
fn default_snapshot() -> f64 {
    0.1
}
fn one() -> f64 {
    1.0
}

/// A scenario resolved to SI units, ready for evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Scenario {
    Highway(HighwayScenario),
    Urban(UrbanScenario),
    Relay(RelayScenario),
}

impl Scenario {
    pub fn secrecy(&self) -> Result<f64> {
        match self {
            Scenario::Highway(s) => highway_secrecy(s),
            Scenario::Urban(s) => urban_secrecy(s),
            Scenario::Relay(s) => relay_secrecy(s),
        }
    }
}

impl ScenarioConfig {
    pub fn kind(&self) -> &'static str {
        match self {
            ScenarioConfig::Highway(_) => "highway",
            ScenarioConfig::UrbanFixed(_) => "urban_fixed",
            ScenarioConfig::UrbanMoving(_) => "urban_moving",
            ScenarioConfig::Relay(_) => "relay",
        }
    }

    /// Every range violation, not just the first.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let mut check = |ok: bool, field: &str, value: f64, rule: &str| {
            if !ok || !value.is_finite() {
                out.push(format!("{field} = {value}: {rule}"));
            }
        };
        match self {
            ScenarioConfig::Highway(c) => {
                check(true, "p_over_n0_db", c.p_over_n0_db, "must be finite");
                check(c.alpha > 0.0, "alpha", c.alpha, "must be > 0");
                check(c.r_m > 0.0, "r_m", c.r_m, "must be > 0");
                check(c.v_kmh >= 0.0, "v_kmh", c.v_kmh, "must be >= 0");
                check(c.tau_s > 0.0, "tau_s", c.tau_s, "must be > 0");
                check(c.theta_rad > 0.0, "theta_rad", c.theta_rad, "must be > 0");
            }
            ScenarioConfig::UrbanFixed(c) | ScenarioConfig::UrbanMoving(c) => {
                check(true, "p_over_n0_db", c.p_over_n0_db, "must be finite");
                check(c.alpha > 0.0, "alpha", c.alpha, "must be > 0");
                check(c.lane_width_m > 0.0, "lane_width_m", c.lane_width_m, "must be > 0");
                check(c.v_limit_kmh >= 0.0, "v_limit_kmh", c.v_limit_kmh, "must be >= 0");
                check(c.t_s >= 0.0, "t_s", c.t_s, "must be >= 0");
                check(c.r0_m > 0.0, "r0_m", c.r0_m, "must be > 0");
            }
            ScenarioConfig::Relay(c) => {
                check(c.p_a >= 0.0, "p_a", c.p_a, "must be >= 0");
                check(c.p_r >= 0.0, "p_r", c.p_r, "must be >= 0");
                for (name, h) in [("h_ab", c.h_ab), ("h_rb", c.h_rb), ("h_ae", c.h_ae), ("h_re", c.h_re)] {
                    check(h >= 0.0, name, h, "must be >= 0");
                }
                check(c.sigma_b_sq > 0.0, "sigma_b_sq", c.sigma_b_sq, "must be > 0");
                check(c.sigma_e_sq > 0.0, "sigma_e_sq", c.sigma_e_sq, "must be > 0");
                check(c.bandwidth_hz > 0.0, "bandwidth_hz", c.bandwidth_hz, "must be > 0");
            }
        }
        out
    }

    pub fn resolve(&self) -> Result<Scenario> {
        let errs = self.violations();
        if !errs.is_empty() {
            return Err(Error::Config(errs.join("; ")));
        }
        Ok(match self {
            ScenarioConfig::Highway(c) => Scenario::Highway(HighwayScenario {
                params: ChannelParams::from_db(c.p_over_n0_db, c.alpha)?,
                r: c.r_m,
                theta: c.theta_rad,
                v: kmh(c.v_kmh)?,
                tau: c.tau_s,
            }),
            ScenarioConfig::UrbanFixed(c) | ScenarioConfig::UrbanMoving(c) => {
                let eavesdropper = if matches!(self, ScenarioConfig::UrbanFixed(_)) {
                    EavesdropperMotion::Fixed
                } else {
                    EavesdropperMotion::Moving
                };
                Scenario::Urban(UrbanScenario {
                    params: ChannelParams::new(Decibel::new(c.p_over_n0_db)?.to_linear(), c.alpha, 1.0)?,
                    lane_width: c.lane_width_m,
                    v_limit: kmh(c.v_limit_kmh)?,
                    t: c.t_s,
                    r0: c.r0_m,
                    eavesdropper,
                })
            }
            ScenarioConfig::Relay(c) => Scenario::Relay(RelayScenario {
                p_a: c.p_a,
                p_r: c.p_r,
                h_ab_sq: c.h_ab,
                h_rb_sq: c.h_rb,
                h_ae_sq: c.h_ae,
                h_re_sq: c.h_re,
                sigma_b_sq: c.sigma_b_sq,
                sigma_e_sq: c.sigma_e_sq,
                bandwidth_hz: c.bandwidth_hz,
            }),
        })
    }
}
