//! RSC negotiation: connect when the target clears the reference secrecy
//! capacity, otherwise turn one secrecy knob and re-evaluate.

use serde::{Deserialize, Serialize};

use super::formation::sc_select;
use crate::channel::{path_loss_coeff_sq, ChannelParams};
use crate::error::{ensure, Result};
use crate::scenarios::{highway_secrecy, relay_secrecy, HighwayScenario, RelayScenario};
use crate::units::Decibel;
use crate::vsc::{CsiRecord, VscOptions};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SecrecyKnobs {
    /// Speed decrement per step, m/s.
    pub speed_step: f64,
    pub power_step_db: f64,
    pub relay_available: bool,
    pub max_iterations: u32,
}

impl SecrecyKnobs {
    pub fn validate(&self) -> Result<()> {
        ensure(self.speed_step > 0.0 && self.power_step_db > 0.0, || {
            format!("knob steps must be positive, got {} m/s and {} dB", self.speed_step, self.power_step_db)
        })?;
        ensure(self.max_iterations >= 1, || "max_iterations must be at least 1".to_string())
    }
}

impl Default for SecrecyKnobs {
    fn default() -> Self {
        Self { speed_step: 10.0 / 3.6, power_step_db: 3.0, relay_available: true, max_iterations: 20 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Knob {
    Speed,
    Power,
    Relay,
}

/// Something whose secrecy toward a target can be re-evaluated after a knob
/// is turned. Each adjuster returns false when the knob is exhausted.
pub trait SecrecyEnvironment {
    fn vsc(&self, target: &str) -> Result<f64>;
    fn decrease_speed(&mut self, step: f64) -> bool;
    fn increase_power(&mut self, step_db: f64) -> bool;
    fn enable_relay(&mut self) -> bool;
}

#[derive(Debug, Clone, PartialEq)]
pub enum Negotiation {
    Connected { target: String, iterations: u32, knobs: Vec<Knob> },
    Failed { target: String, final_vsc: f64, iterations: u32, knobs: Vec<Knob> },
}

impl Negotiation {
    pub fn iterations(&self) -> u32 {
        match self {
            Negotiation::Connected { iterations, .. } | Negotiation::Failed { iterations, .. } => *iterations,
        }
    }

    pub fn is_connected(&self) -> bool {
        matches!(self, Negotiation::Connected { .. })
    }
}

/// Each iteration is one evaluation. Between evaluations the first knob
/// that still moves is applied: speed, then power, then relay.
pub fn rsc_negotiate<E: SecrecyEnvironment>(
    window: &[CsiRecord],
    rsc: f64,
    knobs: &SecrecyKnobs,
    env: &mut E,
) -> Result<Negotiation> {
    knobs.validate()?;
    let target = sc_select(window, VscOptions::default())?;
    let mut applied = Vec::new();
    let mut iterations = 0;
    loop {
        iterations += 1;
        let vsc = env.vsc(&target)?;
        if vsc >= rsc {
            return Ok(Negotiation::Connected { target, iterations, knobs: applied });
        }
        let turned = if env.decrease_speed(knobs.speed_step) {
            Some(Knob::Speed)
        } else if env.increase_power(knobs.power_step_db) {
            Some(Knob::Power)
        } else if knobs.relay_available && env.enable_relay() {
            Some(Knob::Relay)
        } else {
            None
        };
        match turned {
            Some(k) if iterations < knobs.max_iterations => applied.push(k),
            _ => return Ok(Negotiation::Failed { target, final_vsc: vsc, iterations, knobs: applied }),
        }
    }
}

/// Relay placement used once the relay knob is turned.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RelayGains {
    /// Relay power relative to the host's.
    pub power_ratio: f64,
    pub h_rb_sq: f64,
    pub h_re_sq: f64,
}

impl Default for RelayGains {
    fn default() -> Self {
        // relay parked near the eavesdropper, far from the target
        Self { power_ratio: 1.0, h_rb_sq: 1e-14, h_re_sq: 1e-10 }
    }
}

/// Highway car-following model driven by the knobs.
#[derive(Debug, Clone, PartialEq)]
pub struct HighwayEnv {
    pub speed: f64,
    pub min_speed: f64,
    pub p_over_n0_db: f64,
    pub max_power_db: f64,
    pub alpha: f64,
    pub tau: f64,
    pub r: f64,
    pub relay: RelayGains,
    pub relay_enabled: bool,
}

impl HighwayEnv {
    /// 80 km/h, 70 dB, α 1.4, τ 0.2 s, eavesdropper at 1000 m.
    pub fn reference() -> Self {
        Self {
            speed: 80.0 / 3.6,
            min_speed: 10.0 / 3.6,
            p_over_n0_db: 70.0,
            max_power_db: 90.0,
            alpha: 1.4,
            tau: 0.2,
            r: 1000.0,
            relay: RelayGains::default(),
            relay_enabled: false,
        }
    }

    fn params(&self) -> Result<ChannelParams> {
        ChannelParams::from_db(self.p_over_n0_db, self.alpha)
    }

    pub fn secrecy(&self) -> Result<f64> {
        let params = self.params()?;
        if !self.relay_enabled {
            return highway_secrecy(&HighwayScenario { params, r: self.r, theta: 0.0, v: self.speed, tau: self.tau });
        }
        let p_a = Decibel::new(self.p_over_n0_db)?.to_linear();
        relay_secrecy(&RelayScenario {
            p_a,
            p_r: p_a * self.relay.power_ratio,
            h_ab_sq: path_loss_coeff_sq(self.speed * self.tau, self.alpha)?,
            h_rb_sq: self.relay.h_rb_sq,
            h_ae_sq: path_loss_coeff_sq(self.r, self.alpha)?,
            h_re_sq: self.relay.h_re_sq,
            sigma_b_sq: 1.0,
            sigma_e_sq: 1.0,
            bandwidth_hz: 1.0,
        })
    }
}

impl SecrecyEnvironment for HighwayEnv {
    fn vsc(&self, _target: &str) -> Result<f64> {
        self.secrecy()
    }

    fn decrease_speed(&mut self, step: f64) -> bool {
        let next = (self.speed - step).max(self.min_speed);
        let moved = next < self.speed;
        self.speed = next;
        moved
    }

    fn increase_power(&mut self, step_db: f64) -> bool {
        let next = (self.p_over_n0_db + step_db).min(self.max_power_db);
        let moved = next > self.p_over_n0_db;
        self.p_over_n0_db = next;
        moved
    }

    fn enable_relay(&mut self) -> bool {
        !std::mem::replace(&mut self.relay_enabled, true)
    }
}
