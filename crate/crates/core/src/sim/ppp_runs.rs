//! PPP eavesdropper experiments: per-snapshot secrecy at target distances
//! set as fractions of `R_min`, and a many-field Monte-Carlo summary.

use serde::{Deserialize, Serialize};

use super::table::{Cell, Table};
use crate::channel::ChannelParams;
use crate::error::{Error, Result};
use crate::rng::stream_rng;
use crate::stochastic::{
    average_secrecy, nearest_eavesdropper, per_eavesdropper_secrecy, ppp_secrecy, sample_field, CollusionMode,
    PppField, Rect, DEFAULT_REF_AREA_M2,
};
use crate::units::Point2D;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PppRunSpec {
    /// Eavesdroppers per 1000 m².
    pub lambda: f64,
    pub region_area_m2: f64,
    pub p_over_n0_db: f64,
    pub alpha: f64,
    pub seed: u64,
    /// Snapshot mode: target distance as a fraction of `R_min`.
    pub fractions: Vec<f64>,
    pub snapshots: usize,
    /// Monte-Carlo mode.
    pub trials: usize,
    pub target_distance_m: f64,
}

impl Default for PppRunSpec {
    fn default() -> Self {
        Self {
            lambda: 6.0,
            region_area_m2: 1000.0,
            p_over_n0_db: 70.0,
            alpha: 2.0,
            seed: 0,
            fractions: vec![0.1, 0.3, 0.5],
            snapshots: 3,
            trials: 1000,
            target_distance_m: 1.0,
        }
    }
}

impl PppRunSpec {
    pub fn violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        if !(self.lambda > 0.0 && self.lambda.is_finite()) {
            v.push(format!("lambda = {}: must be positive", self.lambda));
        }
        if !(self.region_area_m2 > 0.0) {
            v.push(format!("region_area_m2 = {}: must be positive", self.region_area_m2));
        }
        if !(self.alpha > 0.0) {
            v.push(format!("alpha = {}: must be positive", self.alpha));
        }
        if !self.p_over_n0_db.is_finite() {
            v.push(format!("p_over_n0_db = {}: must be finite", self.p_over_n0_db));
        }
        if self.fractions.iter().any(|&f| !(f > 0.0 && f < 1.0)) {
            v.push(format!("fractions = {:?}: each must lie in (0, 1)", self.fractions));
        }
        if !(self.target_distance_m > 0.0) {
            v.push(format!("target_distance_m = {}: must be positive", self.target_distance_m));
        }
        v
    }

    fn checked(&self) -> Result<(ChannelParams, Rect)> {
        let v = self.violations();
        if !v.is_empty() {
            return Err(Error::Config(v.join("; ")));
        }
        Ok((
            ChannelParams::from_db(self.p_over_n0_db, self.alpha)?,
            Rect::centered(Point2D::ORIGIN, self.region_area_m2)?,
        ))
    }
}

/// Fields drawn on stream `k` until one is non-empty.
fn nonempty_field(spec: &PppRunSpec, region: Rect, k: u64) -> Result<PppField> {
    let mut rng = stream_rng(spec.seed, k);
    loop {
        let f = sample_field(spec.lambda, DEFAULT_REF_AREA_M2, region, &mut rng)?;
        if !f.is_empty() {
            return Ok(f);
        }
    }
}

/// Host at the region centre, target on the +x axis at `fraction·R_min`.
pub fn run_ppp_snapshots(spec: &PppRunSpec) -> Result<Table> {
    let (params, region) = spec.checked()?;
    let host = Point2D::ORIGIN;
    let mut t = Table::new([
        "snapshot",
        "fraction",
        "eavesdroppers",
        "r_min_m",
        "target_distance_m",
        "cs_non_colluding",
        "cs_colluding",
        "cs_avg",
    ]);
    for k in 0..spec.snapshots {
        let field = nonempty_field(spec, region, k as u64)?;
        let (_, r_min) = nearest_eavesdropper(host, &field)?.expect("field is non-empty");
        for &frac in &spec.fractions {
            let target = Point2D::new(frac * r_min, 0.0);
            t.push(vec![
                Cell::Int(k as i64 + 1),
                Cell::Num(frac),
                Cell::Int(field.len() as i64),
                Cell::Num(r_min),
                Cell::Num(frac * r_min),
                Cell::Num(ppp_secrecy(host, target, &field, CollusionMode::NonColluding, &params)?),
                Cell::Num(ppp_secrecy(host, target, &field, CollusionMode::Colluding, &params)?),
                Cell::Num(average_secrecy(host, target, &field, &params)?),
            ])?;
        }
    }
    Ok(t)
}

/// One row per non-empty field: count, `R_min`, and the secrecy measures.
pub fn run_ppp_demo(spec: &PppRunSpec) -> Result<Table> {
    let (params, region) = spec.checked()?;
    let host = Point2D::ORIGIN;
    let target = Point2D::new(spec.target_distance_m, 0.0);
    let mut t = Table::new([
        "trial",
        "eavesdroppers",
        "r_min_m",
        "cs_non_colluding",
        "cs_colluding",
        "cs_avg",
        "cs_max",
    ]);
    for k in 0..spec.trials {
        let mut rng = stream_rng(spec.seed, k as u64);
        let field = sample_field(spec.lambda, DEFAULT_REF_AREA_M2, region, &mut rng)?;
        let Some((_, r_min)) = nearest_eavesdropper(host, &field)? else { continue };
        let terms = per_eavesdropper_secrecy(host, target, &field, &params)?;
        t.push(vec![
            Cell::Int(k as i64),
            Cell::Int(field.len() as i64),
            Cell::Num(r_min),
            Cell::Num(ppp_secrecy(host, target, &field, CollusionMode::NonColluding, &params)?),
            Cell::Num(ppp_secrecy(host, target, &field, CollusionMode::Colluding, &params)?),
            Cell::Num(terms.iter().sum::<f64>() / terms.len() as f64),
            Cell::Num(terms.iter().copied().fold(f64::NEG_INFINITY, f64::max)),
        ])?;
    }
    Ok(t)
}
