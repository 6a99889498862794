//! Shannon capacity, distance path loss, small-scale fading and the two base
//! secrecy-capacity forms (Gaussian wiretap and fading pair).
//!
//! Secrecy values are returned unclamped: a negative result means the
//! eavesdropper's channel is the stronger one. Use [`clamped`] when the
//! information-theoretic (non-negative) quantity is wanted.

use rand::Rng;
use rand_distr::{Distribution, Exp1, Gamma, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{ensure, Error, Result};
use crate::units::Decibel;

/// Transmit-power-to-noise ratio, path-loss exponent and bandwidth of a link.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    pub p_over_n0: f64,
    pub alpha: f64,
    pub bandwidth_hz: f64,
}

impl ChannelParams {
    pub fn new(p_over_n0: f64, alpha: f64, bandwidth_hz: f64) -> Result<Self> {
        ensure(p_over_n0.is_finite() && p_over_n0 > 0.0, || {
            format!("P/N0 must be positive, got {p_over_n0}")
        })?;
        ensure(alpha.is_finite() && alpha > 0.0, || {
            format!("path-loss exponent must be positive, got {alpha}")
        })?;
        ensure(bandwidth_hz.is_finite() && bandwidth_hz > 0.0, || {
            format!("bandwidth must be positive, got {bandwidth_hz}")
        })?;
        Ok(Self { p_over_n0, alpha, bandwidth_hz })
    }

    /// Unit bandwidth, so capacities come out in bits/s/Hz.
    pub fn from_db(p_over_n0_db: f64, alpha: f64) -> Result<Self> {
        Self::new(Decibel::new(p_over_n0_db)?.to_linear(), alpha, 1.0)
    }

    /// SNR at distance `d` under pure path loss.
    pub fn snr_at(&self, d: f64) -> Result<f64> {
        Ok(self.p_over_n0 * path_loss_coeff_sq(d, self.alpha)?)
    }

    pub fn capacity_at(&self, d: f64) -> Result<f64> {
        shannon_capacity(self.bandwidth_hz, self.snr_at(d)?)
    }
}

impl Default for ChannelParams {
    /// 70 dB, α = 1.4, unit bandwidth.
    fn default() -> Self {
        Self { p_over_n0: 1.0e7, alpha: 1.4, bandwidth_hz: 1.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WiretapNoise {
    pub n_m: f64,
    pub n_w: f64,
}

impl WiretapNoise {
    pub fn new(n_m: f64, n_w: f64) -> Result<Self> {
        ensure(n_m > 0.0 && n_w > 0.0, || {
            format!("noise powers must be positive, got N_m={n_m}, N_w={n_w}")
        })?;
        Ok(Self { n_m, n_w })
    }
}

/// Small-scale fading law, normalized to `E[|h|²] = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case", deny_unknown_fields)]
pub enum FadingModel {
    PathLossOnly,
    Rayleigh,
    Rician { k: f64 },
    Nakagami { m: f64 },
}

impl FadingModel {
    pub fn validate(&self) -> Result<()> {
        match *self {
            FadingModel::PathLossOnly | FadingModel::Rayleigh => Ok(()),
            FadingModel::Rician { k } => ensure(k.is_finite() && k >= 0.0, || {
                format!("Rician K-factor must be >= 0, got {k}")
            }),
            FadingModel::Nakagami { m } => ensure(m.is_finite() && m >= 0.5, || {
                format!("Nakagami m must be >= 0.5, got {m}")
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FadingCoefficient {
    pub magnitude_sq: f64,
    pub model: FadingModel,
}

/// Pre-validated sampler for repeated draws of `|h|²`.
#[derive(Debug, Clone, Copy)]
pub struct FadingSampler {
    model: FadingModel,
    kind: SamplerKind,
}

#[derive(Debug, Clone, Copy)]
enum SamplerKind {
    Unit,
    Exponential,
    Rician { los: f64, scatter: f64 },
    Gamma(Gamma<f64>),
}

impl FadingSampler {
    pub fn new(model: FadingModel) -> Result<Self> {
        model.validate()?;
        let kind = match model {
            FadingModel::PathLossOnly => SamplerKind::Unit,
            FadingModel::Rayleigh => SamplerKind::Exponential,
            FadingModel::Rician { k } => SamplerKind::Rician {
                los: (k / (k + 1.0)).sqrt(),
                scatter: (0.5 / (k + 1.0)).sqrt(),
            },
            // |h|² ~ Gamma(shape m, scale 1/m)
            FadingModel::Nakagami { m } => SamplerKind::Gamma(
                Gamma::new(m, 1.0 / m).map_err(|e| Error::Domain(e.to_string()))?,
            ),
        };
        Ok(Self { model, kind })
    }

    pub fn model(&self) -> FadingModel {
        self.model
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self.kind {
            SamplerKind::Unit => 1.0,
            SamplerKind::Exponential => Exp1.sample(rng),
            SamplerKind::Rician { los, scatter } => {
                let re: f64 = StandardNormal.sample(rng);
                let im: f64 = StandardNormal.sample(rng);
                (los + scatter * re).powi(2) + (scatter * im).powi(2)
            }
            SamplerKind::Gamma(g) => g.sample(rng),
        }
    }
}

pub fn sample_fading<R: Rng + ?Sized>(model: FadingModel, rng: &mut R) -> Result<FadingCoefficient> {
    let sampler = FadingSampler::new(model)?;
    Ok(FadingCoefficient { magnitude_sq: sampler.sample(rng), model })
}

pub fn shannon_capacity(bandwidth_hz: f64, snr: f64) -> Result<f64> {
    ensure(bandwidth_hz > 0.0, || format!("bandwidth must be positive, got {bandwidth_hz}"))?;
    ensure(snr >= 0.0, || format!("SNR must be non-negative, got {snr}"))?;
    Ok(bandwidth_hz * snr.ln_1p() / std::f64::consts::LN_2)
}

/// `½log2(1+P/N_m) − ½log2(1+P/N_w)`.
pub fn gaussian_wiretap_secrecy(p: f64, noise: WiretapNoise) -> Result<f64> {
    ensure(p >= 0.0, || format!("transmit power must be non-negative, got {p}"))?;
    let noise = WiretapNoise::new(noise.n_m, noise.n_w)?;
    Ok(0.5 * (log2_1p(p / noise.n_m) - log2_1p(p / noise.n_w)))
}

/// `|h|² = d^(−2α)`.
pub fn path_loss_coeff_sq(d: f64, alpha: f64) -> Result<f64> {
    if d == 0.0 {
        return Err(Error::Singularity("path loss diverges at zero distance".into()));
    }
    ensure(d > 0.0 && d.is_finite(), || format!("distance must be positive, got {d}"))?;
    ensure(alpha > 0.0, || format!("path-loss exponent must be positive, got {alpha}"))?;
    Ok(d.powf(-2.0 * alpha))
}

/// `log2(1 + P|h_AB|²/N0) − log2(1 + P|h_AE|²/N0)`.
pub fn fading_secrecy_pair(params: &ChannelParams, h_ab_sq: f64, h_ae_sq: f64) -> Result<f64> {
    ensure(h_ab_sq >= 0.0 && h_ae_sq >= 0.0, || {
        format!("channel gains must be non-negative, got {h_ab_sq} and {h_ae_sq}")
    })?;
    Ok(log2_1p(params.p_over_n0 * h_ab_sq) - log2_1p(params.p_over_n0 * h_ae_sq))
}

pub fn clamped(secrecy: f64) -> f64 {
    secrecy.max(0.0)
}

#[inline]
pub(crate) fn log2_1p(x: f64) -> f64 {
    x.ln_1p() / std::f64::consts::LN_2
}
