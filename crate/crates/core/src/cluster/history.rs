//! Append-only cluster history (NDJSON), the engine that writes it, history
//! fallback and consensus candidate selection.

use std::collections::{BTreeMap, BTreeSet};
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use super::formation::{form_cluster, ClusterCandidate, Formation};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterState {
    pub cluster_id: u64,
    pub members: BTreeSet<String>,
    pub rsc: f64,
    pub secondary_rsc: f64,
    pub formed_at: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MemberVsc {
    pub id: String,
    pub vsc: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HistoryRecord {
    pub ts: f64,
    pub cluster_id: u64,
    pub members: Vec<MemberVsc>,
    pub rsc: f64,
    pub secondary_rsc: f64,
}

impl HistoryRecord {
    pub fn state(&self) -> ClusterState {
        ClusterState {
            cluster_id: self.cluster_id,
            members: self.members.iter().map(|m| m.id.clone()).collect(),
            rsc: self.rsc,
            secondary_rsc: self.secondary_rsc,
            formed_at: self.ts,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ClusterHistory {
    records: Vec<HistoryRecord>,
}

impl ClusterHistory {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn records(&self) -> &[HistoryRecord] {
        &self.records
    }

    pub fn append(&mut self, record: HistoryRecord) -> Result<()> {
        if let Some(last) = self.records.last() {
            if !(record.ts >= last.ts) {
                return Err(Error::Ordering(format!("history ts {} precedes {}", record.ts, last.ts)));
            }
        }
        self.records.push(record);
        Ok(())
    }

    pub fn replay(&self) -> Vec<ClusterState> {
        self.records.iter().map(HistoryRecord::state).collect()
    }

    pub fn write_ndjson<W: Write>(&self, mut w: W) -> Result<()> {
        for r in &self.records {
            serde_json::to_writer(&mut w, r)?;
            w.write_all(b"\n")?;
        }
        Ok(())
    }

    /// Blank lines and `#` comment lines are skipped.
    pub fn read_ndjson<R: BufRead>(r: R) -> Result<Self> {
        let mut h = Self::new();
        for (i, line) in r.lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let rec: HistoryRecord = serde_json::from_str(&line)
                .map_err(|e| Error::Format(format!("history line {}: {e}", i + 1)))?;
            h.append(rec)?;
        }
        Ok(h)
    }
}

/// Most recently co-clustered vehicle among `candidates`. Within the winning
/// record the higher recorded VSC wins, then the smaller id.
pub fn history_fallback(history: &ClusterHistory, candidates: &BTreeSet<String>) -> Option<String> {
    history.records.iter().rev().find_map(|rec| {
        rec.members
            .iter()
            .filter(|m| candidates.contains(&m.id))
            .min_by(|a, b| b.vsc.total_cmp(&a.vsc).then_with(|| a.id.cmp(&b.id)))
            .map(|m| m.id.clone())
    })
}

/// Single-threaded protocol engine: forms clusters and logs them.
#[derive(Debug, Clone)]
pub struct ClusterEngine {
    pub rsc: f64,
    pub secondary_rsc: f64,
    next_id: u64,
    history: ClusterHistory,
}

impl ClusterEngine {
    pub fn new(rsc: f64, secondary_rsc: f64) -> Result<Self> {
        if !(secondary_rsc <= rsc) {
            return Err(Error::Domain(format!(
                "secondary threshold {secondary_rsc} must not exceed RSC {rsc}"
            )));
        }
        Ok(Self { rsc, secondary_rsc, next_id: 1, history: ClusterHistory::new() })
    }

    pub fn history(&self) -> &ClusterHistory {
        &self.history
    }

    /// Empty formations are returned but not logged and consume no id.
    pub fn form(&mut self, ts: f64, candidates: &[ClusterCandidate]) -> Result<(Formation, Option<ClusterState>)> {
        let f = form_cluster(candidates, self.rsc, self.secondary_rsc)?;
        if f.is_empty() {
            return Ok((f, None));
        }
        let rec = HistoryRecord {
            ts,
            cluster_id: self.next_id,
            members: f.members.iter().map(|(id, &vsc)| MemberVsc { id: id.clone(), vsc }).collect(),
            rsc: self.rsc,
            secondary_rsc: self.secondary_rsc,
        };
        let state = rec.state();
        self.history.append(rec)?;
        self.next_id += 1;
        Ok((f, Some(state)))
    }
}

pub const CLAIM_TOLERANCE_BITS: f64 = 0.1;

/// Responders whose claimed VSC is strictly above `threshold`, highest
/// claim first. With a host-side view, claims off by more than
/// [`CLAIM_TOLERANCE_BITS`] are dropped; ids the host cannot see pass.
pub fn select_consensus_candidates(
    responses: &[(String, f64)],
    threshold: f64,
    host_view: Option<&BTreeMap<String, f64>>,
) -> Vec<String> {
    let mut kept: Vec<&(String, f64)> = responses
        .iter()
        .filter(|(_, claim)| *claim > threshold)
        .filter(|(id, claim)| {
            host_view.and_then(|v| v.get(id)).is_none_or(|host| (claim - host).abs() <= CLAIM_TOLERANCE_BITS)
        })
        .collect();
    kept.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    kept.into_iter().map(|(id, _)| id.clone()).collect()
}

/// Block creation among the selected candidates. Out of scope here.
pub trait Consensus {
    fn propose(&mut self, candidates: &[String]) -> Option<String>;
}

#[derive(Debug, Clone, Copy, Default)]
pub struct NoopConsensus;

impl Consensus for NoopConsensus {
    fn propose(&mut self, _candidates: &[String]) -> Option<String> {
        None
    }
}
