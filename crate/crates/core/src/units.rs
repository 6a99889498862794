//! Unit conversions and planar geometry.
//!
//! Everything inside the crate works in SI units and linear power ratios.
//! Decibels and km/h only appear at configuration boundaries and are converted
//! here.

use serde::{Deserialize, Serialize};

use crate::error::{ensure, Result};

/// A power ratio expressed in decibels (`10·log10`).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Decibel(f64);

impl Decibel {
    pub fn new(value: f64) -> Result<Self> {
        ensure(value.is_finite(), || format!("decibel value {value} is not finite"))?;
        Ok(Self(value))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn to_linear(self) -> f64 {
        10f64.powf(self.0 / 10.0)
    }
}

pub fn db_to_linear(d: Decibel) -> Result<f64> {
    ensure(d.0.is_finite(), || format!("decibel value {} is not finite", d.0))?;
    Ok(d.to_linear())
}

/// Inverse of [`db_to_linear`]; a zero ratio maps to `-inf`.
pub fn linear_to_db(ratio: f64) -> Result<Decibel> {
    ensure(ratio >= 0.0 && ratio.is_finite(), || {
        format!("power ratio {ratio} must be finite and non-negative")
    })?;
    Ok(Decibel(10.0 * ratio.log10()))
}

#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SpeedKmh(f64);

#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SpeedMs(f64);

fn check_speed(v: f64) -> Result<()> {
    ensure(v.is_finite() && v >= 0.0, || {
        format!("speed {v} must be finite and non-negative")
    })
}

impl SpeedKmh {
    pub fn new(v: f64) -> Result<Self> {
        check_speed(v)?;
        Ok(Self(v))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl SpeedMs {
    pub fn new(v: f64) -> Result<Self> {
        check_speed(v)?;
        Ok(Self(v))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

pub fn kmh_to_ms(v: SpeedKmh) -> Result<SpeedMs> {
    check_speed(v.0)?;
    Ok(SpeedMs(v.0 / 3.6))
}

pub fn ms_to_kmh(v: SpeedMs) -> Result<SpeedKmh> {
    check_speed(v.0)?;
    Ok(SpeedKmh(v.0 * 3.6))
}

/// Shorthand for configuration code that holds raw km/h numbers.
pub fn kmh(v: f64) -> Result<f64> {
    Ok(kmh_to_ms(SpeedKmh::new(v)?)?.value())
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point2D {
    pub x: f64,
    pub y: f64,
}

impl Point2D {
    pub const ORIGIN: Point2D = Point2D { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn lerp(self, other: Point2D, u: f64) -> Point2D {
        Point2D::new(self.x + u * (other.x - self.x), self.y + u * (other.y - self.y))
    }
}

pub fn distance(a: Point2D, b: Point2D) -> Result<f64> {
    ensure(a.is_finite() && b.is_finite(), || {
        format!("points {a:?} and {b:?} must have finite coordinates")
    })?;
    Ok((a.x - b.x).hypot(a.y - b.y))
}
