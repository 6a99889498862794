//! Vehicular secrecy capacity (VSC) from received SNR reports only.
//!
//! `VSC = log2(1 + SNR_target) − log2(1 + SNR_xor)`, where `SNR_xor` is the
//! mean SNR over every record heard in the window. The estimate assumes the
//! eavesdropper sits below that mean; nothing here checks it.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::channel::log2_1p;
use crate::error::{Error, Result};
use crate::units::{linear_to_db, Decibel};

pub const DEFAULT_UNIT_TIME_S: f64 = 1.0;

#[derive(Debug, Clone, PartialEq)]
pub struct CsiRecord {
    pub sender_id: String,
    /// Linear SNR.
    pub snr: f64,
    pub timestamp: f64,
    pub chain_element: Option<[u8; 32]>,
}

impl CsiRecord {
    pub fn new(sender_id: impl Into<String>, snr: f64, timestamp: f64) -> Result<Self> {
        if !(snr >= 0.0 && snr.is_finite()) {
            return Err(Error::Domain(format!("snr must be finite and non-negative, got {snr}")));
        }
        if !timestamp.is_finite() {
            return Err(Error::Domain(format!("timestamp must be finite, got {timestamp}")));
        }
        Ok(Self { sender_id: sender_id.into(), snr, timestamp, chain_element: None })
    }

    pub fn with_chain_element(mut self, element: [u8; 32]) -> Self {
        self.chain_element = Some(element);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VscResult {
    pub target_id: String,
    pub vsc: f64,
    pub snr_xor: f64,
    pub m: usize,
    /// Start of the window the result was computed over (0 for ad-hoc windows).
    pub window_start: f64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VscOptions {
    /// Leave the target's own records out of the mean.
    pub exclude_target: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Adequate,
    Inadequate,
}

/// The target's SNR is its most recent record in the window.
pub fn compute_vsc(window: &[CsiRecord], target_id: &str, opts: VscOptions) -> Result<VscResult> {
    if window.is_empty() {
        return Err(Error::InsufficientData("empty CSI window".into()));
    }
    let target = window
        .iter()
        .filter(|r| r.sender_id == target_id)
        .max_by(|a, b| a.timestamp.total_cmp(&b.timestamp))
        .ok_or_else(|| Error::NotFound(format!("target {target_id:?} not in window")))?;

    let heard: Vec<f64> = window
        .iter()
        .filter(|r| !(opts.exclude_target && r.sender_id == target_id))
        .map(|r| r.snr)
        .collect();
    let m = heard.len();
    if m == 0 {
        return Err(Error::InsufficientData(format!(
            "no records besides target {target_id:?} once it is excluded"
        )));
    }
    // offsets from the minimum keep the mean exact when all SNRs agree
    let base = heard.iter().copied().fold(f64::INFINITY, f64::min);
    let snr_xor = base + heard.iter().map(|s| s - base).sum::<f64>() / m as f64;
    Ok(VscResult {
        target_id: target_id.to_string(),
        vsc: log2_1p(target.snr) - log2_1p(snr_xor),
        snr_xor,
        m,
        window_start: 0.0,
    })
}

/// Tumbling windows `[k·unit, (k+1)·unit)`; one result per sender per
/// window, senders in id order.
pub fn windowed_stream(records: &[CsiRecord], unit_time: f64, opts: VscOptions) -> Result<Vec<VscResult>> {
    if !(unit_time > 0.0 && unit_time.is_finite()) {
        return Err(Error::Domain(format!("unit time must be positive, got {unit_time}")));
    }
    if let Some(w) = records.windows(2).find(|w| w[1].timestamp < w[0].timestamp) {
        return Err(Error::Ordering(format!(
            "timestamp {} follows {}",
            w[1].timestamp, w[0].timestamp
        )));
    }
    let mut out = Vec::new();
    let mut rest = records;
    while let Some(first) = rest.first() {
        let k = (first.timestamp / unit_time).floor();
        let len = rest.iter().take_while(|r| (r.timestamp / unit_time).floor() == k).count();
        let (window, tail) = rest.split_at(len);
        let senders: BTreeMap<&str, ()> = window.iter().map(|r| (r.sender_id.as_str(), ())).collect();
        for id in senders.keys() {
            match compute_vsc(window, id, opts) {
                Ok(mut r) => {
                    r.window_start = k * unit_time;
                    out.push(r);
                }
                // a lone sender has nothing to compare against when excluded
                Err(Error::InsufficientData(_)) if opts.exclude_target => {}
                Err(e) => return Err(e),
            }
        }
        rest = tail;
    }
    Ok(out)
}

pub fn security_verdict(vsc: f64, reference: f64) -> Result<Verdict> {
    if !reference.is_finite() {
        return Err(Error::Domain(format!("reference must be finite, got {reference}")));
    }
    Ok(if vsc >= reference { Verdict::Adequate } else { Verdict::Inadequate })
}

pub const CSI_HEADER: [&str; 4] = ["timestamp_s", "sender_id", "snr_db", "chain_element_hex"];

/// Reads `timestamp_s,sender_id,snr_db,chain_element_hex` rows. The header
/// line is optional; SNR is converted from dB to linear.
pub fn read_csi_csv<R: Read>(reader: R) -> Result<Vec<CsiRecord>> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).from_reader(reader);
    let mut out = Vec::new();
    for (i, row) in rdr.records().enumerate() {
        let row = row?;
        let line = i + 1;
        if i == 0 && row.get(0) == Some(CSI_HEADER[0]) {
            continue;
        }
        if row.len() != 4 {
            return Err(Error::Format(format!("line {line}: expected 4 fields, got {}", row.len())));
        }
        let num = |j: usize, what: &str| -> Result<f64> {
            row[j].parse::<f64>().map_err(|_| Error::Format(format!("line {line}: bad {what} {:?}", &row[j])))
        };
        let ts = num(0, "timestamp")?;
        let db = num(2, "snr_db")?;
        // a silent sender is written as -inf dB
        let snr = if db == f64::NEG_INFINITY {
            0.0
        } else {
            Decibel::new(db).map_err(|e| Error::Format(format!("line {line}: {e}")))?.to_linear()
        };
        let mut rec = CsiRecord::new(&row[1], snr, ts)
            .map_err(|e| Error::Format(format!("line {line}: {e}")))?;
        rec.chain_element = parse_chain_element(&row[3]).map_err(|e| Error::Format(format!("line {line}: {e}")))?;
        out.push(rec);
    }
    Ok(out)
}

fn parse_chain_element(s: &str) -> Result<Option<[u8; 32]>> {
    if s.is_empty() {
        return Ok(None);
    }
    let mut buf = [0u8; 32];
    hex::decode_to_slice(s, &mut buf)
        .map_err(|e| Error::Format(format!("chain element {s:?}: {e}")))?;
    Ok(Some(buf))
}

pub fn write_csi_csv<W: Write>(writer: W, records: &[CsiRecord]) -> Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(writer);
    w.write_record(CSI_HEADER)?;
    for r in records {
        let db = linear_to_db(r.snr)?.value();
        let chain = r.chain_element.map(hex::encode).unwrap_or_default();
        w.write_record([r.timestamp.to_string(), r.sender_id.clone(), db.to_string(), chain])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rec(id: &str, snr: f64, ts: f64) -> CsiRecord {
        CsiRecord::new(id, snr, ts).unwrap()
    }

    #[test]
    fn single_record_is_zero() {
        let r = compute_vsc(&[rec("a", 7.5, 0.0)], "a", VscOptions::default()).unwrap();
        assert_eq!(r.vsc, 0.0);
        assert_eq!(r.snr_xor, 7.5);
        assert_eq!(r.m, 1);
    }

    #[test]
    fn one_and_three() {
        let w = [rec("a", 1.0, 0.0), rec("b", 3.0, 0.1)];
        let r = compute_vsc(&w, "b", VscOptions::default()).unwrap();
        assert!((r.vsc - (2.0 - 3f64.log2())).abs() < 1e-12);
        assert!((r.vsc - 0.4150374992788438).abs() < 1e-15);
    }

    #[test]
    fn uniform_window_is_zero_for_every_target() {
        let w: Vec<_> = ["a", "b", "c"].iter().map(|id| rec(id, 4.2, 0.0)).collect();
        for id in ["a", "b", "c"] {
            assert_eq!(compute_vsc(&w, id, VscOptions::default()).unwrap().vsc, 0.0);
        }
    }

    #[test]
    fn errors() {
        assert!(matches!(compute_vsc(&[], "a", VscOptions::default()), Err(Error::InsufficientData(_))));
        assert!(matches!(compute_vsc(&[rec("a", 1.0, 0.0)], "z", VscOptions::default()), Err(Error::NotFound(_))));
        assert!(CsiRecord::new("a", -1.0, 0.0).is_err());
    }

    #[test]
    fn exclude_target_changes_mean() {
        let w = [rec("a", 1.0, 0.0), rec("b", 3.0, 0.1)];
        let r = compute_vsc(&w, "b", VscOptions { exclude_target: true }).unwrap();
        assert_eq!(r.snr_xor, 1.0);
        assert_eq!(r.vsc, 1.0);
    }

    #[test]
    fn latest_target_record_is_used() {
        let w = [rec("a", 1.0, 0.0), rec("a", 3.0, 0.5)];
        let r = compute_vsc(&w, "a", VscOptions::default()).unwrap();
        assert!((r.vsc - (2.0 - 3f64.log2())).abs() < 1e-12);
    }

    #[test]
    fn stream_windows() {
        assert!(windowed_stream(&[], 1.0, VscOptions::default()).unwrap().is_empty());
        let recs = [rec("b", 3.0, 0.1), rec("a", 1.0, 0.2), rec("a", 2.0, 2.5)];
        let out = windowed_stream(&recs, 1.0, VscOptions::default()).unwrap();
        assert_eq!(out.len(), 3);
        assert_eq!((out[0].target_id.as_str(), out[1].target_id.as_str()), ("a", "b"));
        assert_eq!(out[2].window_start, 2.0);
        assert_eq!(out[2].vsc, 0.0);
        let unsorted = [rec("a", 1.0, 1.0), rec("b", 1.0, 0.5)];
        assert!(matches!(windowed_stream(&unsorted, 1.0, VscOptions::default()), Err(Error::Ordering(_))));
    }

    #[test]
    fn verdict_boundary() {
        assert_eq!(security_verdict(1.5, 1.5).unwrap(), Verdict::Adequate);
        assert_eq!(security_verdict(1.5 - 1e-12, 1.5).unwrap(), Verdict::Inadequate);
        assert_eq!(security_verdict(0.0, 0.0).unwrap(), Verdict::Adequate);
        assert!(security_verdict(0.0, f64::NAN).is_err());
    }

    #[test]
    fn csv_round_trip() {
        let recs = vec![
            rec("v01", 100.0, 0.0).with_chain_element([0xab; 32]),
            rec("v02", 0.5, 0.25),
            rec("v03", 0.0, 0.5),
        ];
        let mut buf = Vec::new();
        write_csi_csv(&mut buf, &recs).unwrap();
        let back = read_csi_csv(buf.as_slice()).unwrap();
        assert_eq!(back.len(), 3);
        assert_eq!(back[2].snr, 0.0);
        assert_eq!(back[0].chain_element, Some([0xab; 32]));
        assert!((back[0].snr - 100.0).abs() < 1e-9);
        assert_eq!(back[1].chain_element, None);
    }

    #[test]
    fn csv_without_header_and_bad_hex() {
        let ok = read_csi_csv("0.5,x,10,\n".as_bytes()).unwrap();
        assert!((ok[0].snr - 10.0).abs() < 1e-12);
        assert!(matches!(read_csi_csv("0.5,x,10,abcd\n".as_bytes()), Err(Error::Format(_))));
        assert!(matches!(read_csi_csv("0.5,x,ten,\n".as_bytes()), Err(Error::Format(_))));
    }

    fn window_strategy() -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(0.0..1e4f64, 1..12)
    }

    fn window_of(snrs: &[f64]) -> Vec<CsiRecord> {
        snrs.iter().enumerate().map(|(i, &s)| rec(&format!("v{i:02}"), s, 0.0)).collect()
    }

    proptest! {
        // A lone record always scores 0, so strictness needs a second sender.
        #[test]
        fn increasing_in_target_snr(snrs in prop::collection::vec(0.0..1e4f64, 2..12), bump in 1e-3..100.0f64) {
            let w = window_of(&snrs);
            let base = compute_vsc(&w, "v00", VscOptions::default()).unwrap().vsc;
            let mut w2 = w.clone();
            w2[0].snr += bump;
            let up = compute_vsc(&w2, "v00", VscOptions::default()).unwrap().vsc;
            prop_assert!(up > base);
        }

        #[test]
        fn argmax_snr_maximizes_vsc(snrs in window_strategy()) {
            let w = window_of(&snrs);
            let best = (0..snrs.len()).max_by(|&a, &b| snrs[a].total_cmp(&snrs[b])).unwrap();
            let best_vsc = compute_vsc(&w, &w[best].sender_id, VscOptions::default()).unwrap().vsc;
            for r in &w {
                prop_assert!(compute_vsc(&w, &r.sender_id, VscOptions::default()).unwrap().vsc <= best_vsc);
            }
        }

        #[test]
        fn scaling_sensitivity_bounded(snrs in window_strategy(), k in 1.0001..50.0f64, t in 0usize..12) {
            let w = window_of(&snrs);
            let id = &w[t % w.len()].sender_id;
            let base = compute_vsc(&w, id, VscOptions::default()).unwrap().vsc;
            let scaled: Vec<_> = snrs.iter().map(|s| s * k).collect();
            let after = compute_vsc(&window_of(&scaled), id, VscOptions::default()).unwrap().vsc;
            prop_assert!((after - base).abs() < k.log2());
        }
    }
}
