//! Randomly placed eavesdroppers and fading-averaged secrecy.

mod ergodic;
mod ppp;

pub use ergodic::{ergodic_secrecy_mc, ErgodicConfig, ErgodicEstimate, LinkFading};
pub use ppp::{
    average_secrecy, binding_eavesdropper, high_snr_secrecy, nearest_eavesdropper, per_eavesdropper_secrecy,
    poisson_pmf, ppp_secrecy, sample_field, CollusionMode, PppField, Rect, DEFAULT_REF_AREA_M2,
};
