use rand::Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use crate::channel::{log2_1p, ChannelParams};
use crate::error::{ensure, Error, Result};
use crate::units::{distance, Point2D};

/// Density reference area: λ is "eavesdroppers per 1000 m²".
pub const DEFAULT_REF_AREA_M2: f64 = 1000.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub min: Point2D,
    pub max: Point2D,
}

impl Rect {
    pub fn new(min: Point2D, max: Point2D) -> Result<Self> {
        ensure(min.is_finite() && max.is_finite() && max.x > min.x && max.y > min.y, || {
            format!("region {min:?}..{max:?} must have positive area")
        })?;
        Ok(Self { min, max })
    }

    /// Square of the given area centered on `center`.
    pub fn centered(center: Point2D, area_m2: f64) -> Result<Self> {
        ensure(area_m2 > 0.0, || format!("region area must be positive, got {area_m2}"))?;
        let h = area_m2.sqrt() / 2.0;
        Self::new(Point2D::new(center.x - h, center.y - h), Point2D::new(center.x + h, center.y + h))
    }

    pub fn area(&self) -> f64 {
        (self.max.x - self.min.x) * (self.max.y - self.min.y)
    }

    pub fn contains(&self, p: Point2D) -> bool {
        (self.min.x..=self.max.x).contains(&p.x) && (self.min.y..=self.max.y).contains(&p.y)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PppField {
    pub lambda_per_ref_area: f64,
    pub ref_area_m2: f64,
    pub region: Rect,
    pub positions: Vec<Point2D>,
}

impl PppField {
    pub fn expected_count(&self) -> f64 {
        self.lambda_per_ref_area * self.region.area() / self.ref_area_m2
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }
}

/// How eavesdropper SNRs combine in the wiretap term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CollusionMode {
    /// Eavesdroppers pool their observations: SNRs add.
    Colluding,
    /// Only the strongest eavesdropper matters.
    NonColluding,
}

/// `λⁿ e^{−λ} / n!`, evaluated in the log domain.
pub fn poisson_pmf(n: u64, lambda: f64) -> Result<f64> {
    ensure(lambda >= 0.0 && lambda.is_finite(), || {
        format!("Poisson mean must be finite and non-negative, got {lambda}")
    })?;
    if lambda == 0.0 {
        return Ok(if n == 0 { 1.0 } else { 0.0 });
    }
    let ln_fact: f64 = (2..=n).map(|k| (k as f64).ln()).sum();
    Ok((n as f64 * lambda.ln() - lambda - ln_fact).exp())
}

/// Draws a homogeneous PPP on `region`: Poisson count, uniform positions.
pub fn sample_field<R: Rng + ?Sized>(
    lambda_per_ref_area: f64,
    ref_area_m2: f64,
    region: Rect,
    rng: &mut R,
) -> Result<PppField> {
    ensure(lambda_per_ref_area >= 0.0 && lambda_per_ref_area.is_finite(), || {
        format!("density must be finite and non-negative, got {lambda_per_ref_area}")
    })?;
    ensure(ref_area_m2 > 0.0, || format!("reference area must be positive, got {ref_area_m2}"))?;
    let region = Rect::new(region.min, region.max)?;
    let mean = lambda_per_ref_area * region.area() / ref_area_m2;
    let count = if mean == 0.0 {
        0
    } else {
        let dist = Poisson::new(mean).map_err(|e| Error::Domain(e.to_string()))?;
        dist.sample(rng) as usize
    };
    let positions = (0..count)
        .map(|_| {
            Point2D::new(
                rng.random_range(region.min.x..region.max.x),
                rng.random_range(region.min.y..region.max.y),
            )
        })
        .collect();
    Ok(PppField { lambda_per_ref_area, ref_area_m2, region, positions })
}

fn snr(params: &ChannelParams, from: Point2D, to: Point2D) -> Result<f64> {
    let d = distance(from, to)?;
    if d == 0.0 {
        return Err(Error::Singularity(format!("node at {to:?} coincides with the transmitter")));
    }
    params.snr_at(d)
}

fn eavesdropper_snrs(host: Point2D, field: &PppField, params: &ChannelParams) -> Result<Vec<f64>> {
    field.positions.iter().map(|&e| snr(params, host, e)).collect()
}

/// `log2(1+SNR_AB) − log2(1+𝓛(SNR_AE))`. An empty field leaves the full
/// legitimate capacity.
pub fn ppp_secrecy(
    host: Point2D,
    target: Point2D,
    field: &PppField,
    mode: CollusionMode,
    params: &ChannelParams,
) -> Result<f64> {
    let legit = snr(params, host, target)?;
    let snrs = eavesdropper_snrs(host, field, params)?;
    let wiretap = match mode {
        CollusionMode::Colluding => snrs.iter().sum(),
        CollusionMode::NonColluding => snrs.iter().copied().fold(0.0, f64::max),
    };
    Ok(log2_1p(legit) - log2_1p(wiretap))
}

/// Secrecy against each eavesdropper taken alone.
pub fn per_eavesdropper_secrecy(
    host: Point2D,
    target: Point2D,
    field: &PppField,
    params: &ChannelParams,
) -> Result<Vec<f64>> {
    let legit = log2_1p(snr(params, host, target)?);
    Ok(eavesdropper_snrs(host, field, params)?.into_iter().map(|s| legit - log2_1p(s)).collect())
}

pub fn average_secrecy(host: Point2D, target: Point2D, field: &PppField, params: &ChannelParams) -> Result<f64> {
    if field.is_empty() {
        return Err(Error::Domain("average secrecy needs at least one eavesdropper".into()));
    }
    let terms = per_eavesdropper_secrecy(host, target, field, params)?;
    Ok(terms.iter().sum::<f64>() / terms.len() as f64)
}

/// Index of the eavesdropper with the highest SNR at the host's transmitter.
pub fn binding_eavesdropper(host: Point2D, field: &PppField, params: &ChannelParams) -> Result<Option<usize>> {
    let snrs = eavesdropper_snrs(host, field, params)?;
    Ok(snrs
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1).then(b.0.cmp(&a.0)))
        .map(|(i, _)| i))
}

/// Index and distance of the eavesdropper closest to `host` (`R_min`).
pub fn nearest_eavesdropper(host: Point2D, field: &PppField) -> Result<Option<(usize, f64)>> {
    let mut best: Option<(usize, f64)> = None;
    for (i, &e) in field.positions.iter().enumerate() {
        let d = distance(host, e)?;
        if best.is_none_or(|(_, bd)| d < bd) {
            best = Some((i, d));
        }
    }
    Ok(best)
}

/// High-SNR approximation `log2(d_AB^(−2α) / 𝓛(d_AE^(−2α)))`. Only meaningful
/// as a cross-check when every SNR involved is large.
pub fn high_snr_secrecy(
    host: Point2D,
    target: Point2D,
    field: &PppField,
    mode: CollusionMode,
    params: &ChannelParams,
) -> Result<f64> {
    if field.is_empty() {
        return Err(Error::Domain("approximation needs at least one eavesdropper".into()));
    }
    let legit = snr(params, host, target)?;
    let snrs = eavesdropper_snrs(host, field, params)?;
    let wiretap = match mode {
        CollusionMode::Colluding => snrs.iter().sum(),
        CollusionMode::NonColluding => snrs.iter().copied().fold(0.0, f64::max),
    };
    Ok((legit / wiretap).log2())
}
