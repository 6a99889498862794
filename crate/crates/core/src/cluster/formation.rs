//! Target selection and threshold-based cluster partitioning.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::identity::{validate_identity, ChainProof, VehicleIdentity};
use crate::error::{Error, Result};
use crate::vsc::{compute_vsc, CsiRecord, VscOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RoadClass {
    Highway,
    Urban,
}

impl RoadClass {
    /// `(rsc, secondary_rsc)` in bits/s/Hz. Highway is the laxer class.
    pub fn default_thresholds(self) -> (f64, f64) {
        match self {
            RoadClass::Highway => (1.0, 0.5),
            RoadClass::Urban => (2.0, 1.0),
        }
    }
}

/// Sender with the largest VSC in `window`; ties go to the smallest id.
pub fn sc_select(window: &[CsiRecord], opts: VscOptions) -> Result<String> {
    let senders: BTreeSet<&str> = window.iter().map(|r| r.sender_id.as_str()).collect();
    let mut best: Option<(&str, f64)> = None;
    for id in senders {
        let v = compute_vsc(window, id, opts)?.vsc;
        // ids arrive sorted, so strict > keeps the smallest on ties
        if best.is_none_or(|(_, b)| v > b) {
            best = Some((id, v));
        }
    }
    best.map(|(id, _)| id.to_string())
        .ok_or_else(|| Error::InsufficientData("no candidates in CSI window".into()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClusterCandidate {
    pub identity: VehicleIdentity,
    pub proof: ChainProof,
    pub vsc: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Formation {
    /// Member id → VSC at formation.
    pub members: BTreeMap<String, f64>,
    pub pseudo: BTreeSet<String>,
    /// Invalid identities and candidates below the secondary threshold.
    pub excluded: BTreeSet<String>,
    pub rsc: f64,
    pub secondary_rsc: f64,
}

impl Formation {
    /// No member qualified; the result is still usable (pseudo may be set).
    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

pub fn form_cluster(candidates: &[ClusterCandidate], rsc: f64, secondary_rsc: f64) -> Result<Formation> {
    if !(secondary_rsc <= rsc) {
        return Err(Error::Domain(format!(
            "secondary threshold {secondary_rsc} must not exceed RSC {rsc}"
        )));
    }
    let mut out = Formation { rsc, secondary_rsc, ..Default::default() };
    for c in candidates {
        let id = c.identity.vehicle_id.clone();
        let valid = c.proof.position < c.identity.chain_length
            && validate_identity(&c.identity, &c.proof.preimage, c.proof.position)?;
        if valid && c.vsc >= rsc {
            out.members.insert(id, c.vsc);
        } else if valid && c.vsc >= secondary_rsc {
            out.pseudo.insert(id);
        } else {
            out.excluded.insert(id);
        }
    }
    Ok(out)
}
