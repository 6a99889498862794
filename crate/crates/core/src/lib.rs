//! Vehicular physical-layer secrecy: analytic secrecy-capacity models,
//! stochastic eavesdropper fields, SNR-only vehicular secrecy capacity (VSC),
//! the security-cluster protocol, and a time-stepped mobility harness.

// `!(x > 0.0)` is deliberate: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channel;
pub mod cluster;
pub mod error;
pub mod kinematics;
pub mod rng;
pub mod scenarios;
pub mod sim;
pub mod stochastic;
pub mod units;
pub mod vsc;

pub use error::{Error, Result};
