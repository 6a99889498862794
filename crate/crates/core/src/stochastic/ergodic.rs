//! Monte-Carlo estimate of fading-averaged (ergodic) secrecy capacity.
//!
//! The supremum over power allocations is not solved. The estimator uses an
//! on/off policy: constant power `γ` whenever the legitimate channel is the
//! stronger one (the advantage set), silence otherwise. That is a lower bound
//! on the optimum.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{log2_1p, FadingModel, FadingSampler};
use crate::error::{ensure, Result};
use crate::rng::stream_rng;

const BATCH: usize = 1 << 15;

/// Fading law of one link scaled by its mean power gain (e.g. path loss).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkFading {
    pub model: FadingModel,
    pub mean_gain: f64,
}

impl LinkFading {
    pub fn new(model: FadingModel, mean_gain: f64) -> Result<Self> {
        model.validate()?;
        ensure(mean_gain >= 0.0 && mean_gain.is_finite(), || {
            format!("mean gain must be finite and non-negative, got {mean_gain}")
        })?;
        Ok(Self { model, mean_gain })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErgodicConfig {
    /// Transmit power `γ` used inside the advantage set.
    pub power: f64,
    pub sigma_b_sq: f64,
    pub sigma_e_sq: f64,
    pub sample_count: usize,
    pub seed: u64,
    /// When false, every fading state contributes (negative ones included).
    pub restrict_to_advantage: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErgodicEstimate {
    pub mean: f64,
    /// Standard error of `mean`; infinite for a single sample.
    pub stderr: f64,
    pub samples: usize,
    /// Samples where `|h_AB|²/σ_B² > |h_AE|²/σ_E²`.
    pub advantage_samples: usize,
}

impl ErgodicEstimate {
    /// Set when no sample landed in the advantage set; the estimate is then 0.
    pub fn empty_advantage_set(&self) -> bool {
        self.advantage_samples == 0
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    n: usize,
    mean: f64,
    m2: f64,
    hits: usize,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.n += 1;
        let delta = x - self.mean;
        self.mean += delta / self.n as f64;
        self.m2 += delta * (x - self.mean);
    }

    fn merge(self, other: Moments) -> Moments {
        if self.n == 0 {
            return other;
        }
        if other.n == 0 {
            return self;
        }
        let n = self.n + other.n;
        let delta = other.mean - self.mean;
        Moments {
            n,
            mean: self.mean + delta * other.n as f64 / n as f64,
            m2: self.m2 + other.m2 + delta * delta * (self.n as f64 * other.n as f64) / n as f64,
            hits: self.hits + other.hits,
        }
    }
}

pub fn ergodic_secrecy_mc(cfg: &ErgodicConfig, legit: LinkFading, eve: LinkFading) -> Result<ErgodicEstimate> {
    ensure(cfg.sample_count >= 1, || "sample_count must be at least 1".to_string())?;
    ensure(cfg.power > 0.0, || format!("power budget must be positive, got {}", cfg.power))?;
    ensure(cfg.sigma_b_sq > 0.0 && cfg.sigma_e_sq > 0.0, || {
        format!("noise powers must be positive, got {} and {}", cfg.sigma_b_sq, cfg.sigma_e_sq)
    })?;
    let legit = LinkFading::new(legit.model, legit.mean_gain)?;
    let eve = LinkFading::new(eve.model, eve.mean_gain)?;
    let sample_ab = FadingSampler::new(legit.model)?;
    let sample_ae = FadingSampler::new(eve.model)?;

    let batches = cfg.sample_count.div_ceil(BATCH);
    // Fixed batch partition and in-order merge: the result does not depend on
    // the thread count.
    let parts: Vec<Moments> = (0..batches)
        .into_par_iter()
        .map(|b| {
            let mut rng = stream_rng(cfg.seed, b as u64);
            let len = BATCH.min(cfg.sample_count - b * BATCH);
            let mut acc = Moments::default();
            for _ in 0..len {
                let g_ab = legit.mean_gain * sample_ab.sample(&mut rng) / cfg.sigma_b_sq;
                let g_ae = eve.mean_gain * sample_ae.sample(&mut rng) / cfg.sigma_e_sq;
                let advantage = g_ab > g_ae;
                if advantage {
                    acc.hits += 1;
                }
                let rate = log2_1p(cfg.power * g_ab) - log2_1p(cfg.power * g_ae);
                acc.push(if advantage || !cfg.restrict_to_advantage { rate } else { 0.0 });
            }
            acc
        })
        .collect();
    let total = parts.into_iter().fold(Moments::default(), Moments::merge);

    let stderr = if total.n < 2 {
        f64::INFINITY
    } else {
        (total.m2 / (total.n - 1) as f64 / total.n as f64).sqrt()
    };
    let mean = if cfg.restrict_to_advantage && total.hits == 0 { 0.0 } else { total.mean };
    Ok(ErgodicEstimate { mean, stderr, samples: total.n, advantage_samples: total.hits })
}
