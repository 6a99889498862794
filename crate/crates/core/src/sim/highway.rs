//! Six-lane highway with 25 nodes. Lanes 0–2 run toward +x, lanes 3–5
//! toward −x; a node leaving the road re-enters at the other end. Speeds are
//! redrawn uniformly from the configured range at a fixed interval and held
//! in between.

use std::collections::BTreeSet;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::table::{Cell, Table};
use crate::channel::{log2_1p, ChannelParams};
use crate::cluster::{ChainHash, ChainProof, ClusterCandidate, ClusterEngine, ClusterHistory, VehicleIdentity};
use crate::error::{Error, Result};
use crate::rng::{rng_from_seed, SimRng};
use crate::units::{distance, kmh, Point2D};
use crate::vsc::{compute_vsc, CsiRecord, VscOptions};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Layout {
    #[default]
    Random,
    /// Node `i` in lane `i mod lanes` at `x = i·length/nodes`.
    EquallySpaced,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HighwayWorld {
    pub lanes: usize,
    pub lane_width_m: f64,
    pub length_m: f64,
    pub nodes: usize,
    pub sources: Vec<String>,
    pub obu_range_m: f64,
    pub duration_s: f64,
    pub dt_s: f64,
    pub seed: u64,
    pub speed_range_kmh: (f64, f64),
    pub speed_redraw_s: f64,
    pub layout: Layout,
    /// Fixed host–eavesdropper distance in the secrecy term.
    pub eavesdropper_distance_m: f64,
    pub p_over_n0_db: f64,
    pub alpha: f64,
}

impl Default for HighwayWorld {
    fn default() -> Self {
        Self {
            lanes: 6,
            lane_width_m: 10.0,
            length_m: 2500.0,
            nodes: 25,
            sources: vec!["v00".into(), "v01".into()],
            obu_range_m: 2500.0,
            duration_s: 100.0,
            dt_s: 0.1,
            seed: 0,
            speed_range_kmh: (0.0, 120.0),
            speed_redraw_s: 1.0,
            layout: Layout::Random,
            eavesdropper_distance_m: 1000.0,
            p_over_n0_db: 70.0,
            alpha: 2.0,
        }
    }
}

pub fn node_id(i: usize) -> String {
    format!("v{i:02}")
}

impl HighwayWorld {
    pub fn violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        let mut check = |ok: bool, msg: String| {
            if !ok {
                v.push(msg);
            }
        };
        check(self.lanes >= 1, format!("lanes = {}: must be at least 1", self.lanes));
        check(self.lane_width_m > 0.0, format!("lane_width_m = {}: must be positive", self.lane_width_m));
        check(self.length_m > 0.0, format!("length_m = {}: must be positive", self.length_m));
        check(self.nodes >= 2, format!("nodes = {}: must be at least 2", self.nodes));
        check(self.obu_range_m > 0.0, format!("obu_range_m = {}: must be positive", self.obu_range_m));
        check(self.duration_s > 0.0, format!("duration_s = {}: must be positive", self.duration_s));
        check(self.dt_s > 0.0, format!("dt_s = {}: must be positive", self.dt_s));
        check(self.speed_redraw_s > 0.0, format!("speed_redraw_s = {}: must be positive", self.speed_redraw_s));
        let (lo, hi) = self.speed_range_kmh;
        check(
            (0.0..=120.0).contains(&lo) && (lo..=120.0).contains(&hi),
            format!("speed_range_kmh = ({lo}, {hi}): must satisfy 0 ≤ lo ≤ hi ≤ 120"),
        );
        check(
            self.eavesdropper_distance_m > 0.0,
            format!("eavesdropper_distance_m = {}: must be positive", self.eavesdropper_distance_m),
        );
        check(self.alpha > 0.0, format!("alpha = {}: must be positive", self.alpha));
        check(self.p_over_n0_db.is_finite(), format!("p_over_n0_db = {}: must be finite", self.p_over_n0_db));
        check(!self.sources.is_empty(), "sources: at least one source is required".into());
        for s in &self.sources {
            let known = (0..self.nodes).any(|i| node_id(i) == *s);
            check(known, format!("sources: unknown node {s:?}"));
        }
        v
    }

    pub fn validate(&self) -> Result<()> {
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(v.join("; ")))
        }
    }

    pub fn steps(&self) -> usize {
        (self.duration_s / self.dt_s + 1e-9).floor() as usize
    }

    fn redraw_every(&self) -> usize {
        ((self.speed_redraw_s / self.dt_s).round() as usize).max(1)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Node {
    pub id: String,
    pub lane: usize,
    pub pos: Point2D,
    /// m/s.
    pub speed: f64,
    /// +1 or −1 along x.
    pub heading: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Observation {
    pub t: f64,
    pub source_id: String,
    pub target_id: String,
    pub distance: f64,
    pub secrecy: f64,
    /// Projection of source→target on the source's heading, m.
    pub along_track: f64,
}

/// Owns the mutable world state. `run_*` functions drive it; tests may step
/// it directly.
#[derive(Debug, Clone)]
pub struct HighwaySim {
    world: HighwayWorld,
    nodes: Vec<Node>,
    rng: SimRng,
    step: usize,
    channel: ChannelParams,
}

impl HighwaySim {
    pub fn new(world: HighwayWorld) -> Result<Self> {
        world.validate()?;
        let channel = ChannelParams::from_db(world.p_over_n0_db, world.alpha)?;
        let mut rng = rng_from_seed(world.seed);
        let nodes = (0..world.nodes)
            .map(|i| {
                let (lane, x) = match world.layout {
                    Layout::Random => (rng.random_range(0..world.lanes), rng.random_range(0.0..world.length_m)),
                    Layout::EquallySpaced => (i % world.lanes, i as f64 * world.length_m / world.nodes as f64),
                };
                let heading = if lane < world.lanes.div_ceil(2) { 1.0 } else { -1.0 };
                let y = (lane as f64 + 0.5) * world.lane_width_m;
                Node { id: node_id(i), lane, pos: Point2D::new(x, y), speed: 0.0, heading }
            })
            .collect();
        Ok(Self { world, nodes, rng, step: 0, channel })
    }

    pub fn world(&self) -> &HighwayWorld {
        &self.world
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn time(&self) -> f64 {
        self.step as f64 * self.world.dt_s
    }

    pub fn finished(&self) -> bool {
        self.step >= self.world.steps()
    }

    fn index_of(&self, id: &str) -> Result<usize> {
        self.nodes
            .iter()
            .position(|n| n.id == id)
            .ok_or_else(|| Error::NotFound(format!("node {id:?}")))
    }

    /// Redraws speeds when due. Call once per step before observing.
    pub fn refresh_speeds(&mut self) -> Result<()> {
        if !self.step.is_multiple_of(self.world.redraw_every()) {
            return Ok(());
        }
        let (lo, hi) = self.world.speed_range_kmh;
        for n in &mut self.nodes {
            n.speed = kmh(self.rng.random_range(lo..=hi))?;
        }
        Ok(())
    }

    /// Secrecy over a link of length `d` against the fixed eavesdropper.
    pub fn secrecy_at(&self, d: f64) -> Result<f64> {
        Ok(log2_1p(self.channel.snr_at(d)?) - log2_1p(self.channel.snr_at(self.world.eavesdropper_distance_m)?))
    }

    /// Nearest node within OBU range of `source`, with the source displaced
    /// `shift` metres along its heading. Ties go to the smaller id.
    pub fn observe(&self, source: &str, shift: f64) -> Result<Option<Observation>> {
        let si = self.index_of(source)?;
        let s = &self.nodes[si];
        let from = Point2D::new(s.pos.x + shift * s.heading, s.pos.y);
        let mut best: Option<(usize, f64)> = None;
        for (i, n) in self.nodes.iter().enumerate() {
            if i == si {
                continue;
            }
            let d = distance(from, n.pos)?;
            if d <= self.world.obu_range_m && best.is_none_or(|(_, bd)| d < bd) {
                best = Some((i, d));
            }
        }
        let Some((ti, d)) = best else { return Ok(None) };
        let target = &self.nodes[ti];
        Ok(Some(Observation {
            t: self.time(),
            source_id: s.id.clone(),
            target_id: target.id.clone(),
            distance: d,
            secrecy: self.secrecy_at(d)?,
            along_track: (target.pos.x - from.x) * s.heading,
        }))
    }

    pub fn advance(&mut self) {
        let (len, dt) = (self.world.length_m, self.world.dt_s);
        for n in &mut self.nodes {
            n.pos.x = (n.pos.x + n.heading * n.speed * dt).rem_euclid(len);
        }
        self.step += 1;
    }
}

pub fn run_highway_experiment(world: &HighwayWorld) -> Result<Vec<Observation>> {
    let mut sim = HighwaySim::new(world.clone())?;
    let mut out = Vec::new();
    while !sim.finished() {
        sim.refresh_speeds()?;
        for src in &world.sources {
            out.extend(sim.observe(src, 0.0)?);
        }
        sim.advance();
    }
    Ok(out)
}

pub fn observations_table(rows: &[Observation]) -> Table {
    let mut t = Table::new(["t_s", "source_id", "target_id", "distance_m", "secrecy"]);
    t.rows = rows
        .iter()
        .map(|o| {
            vec![
                Cell::Num(o.t),
                Cell::Text(o.source_id.clone()),
                Cell::Text(o.target_id.clone()),
                Cell::Num(o.distance),
                Cell::Num(o.secrecy),
            ]
        })
        .collect();
    t
}

pub const PERTURBATION_DELTA_M: f64 = 5.0;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PerturbedPair {
    pub baseline: Observation,
    pub perturbed: Observation,
}

impl PerturbedPair {
    pub fn same_target(&self) -> bool {
        self.baseline.target_id == self.perturbed.target_id
    }
}

/// Baseline and source-shifted observations from the same world state.
/// `|delta|` other than 0 or 5 m needs `allow_any_delta`.
pub fn run_perturbation_study(world: &HighwayWorld, delta: f64, allow_any_delta: bool) -> Result<Vec<PerturbedPair>> {
    if !delta.is_finite() || !(allow_any_delta || delta == 0.0 || delta.abs() == PERTURBATION_DELTA_M) {
        return Err(Error::Config(format!(
            "perturbation delta {delta} m is not ±{PERTURBATION_DELTA_M} m; set allow_any_delta to use it"
        )));
    }
    let mut sim = HighwaySim::new(world.clone())?;
    let mut out = Vec::new();
    while !sim.finished() {
        sim.refresh_speeds()?;
        for src in &world.sources {
            if let (Some(baseline), Some(perturbed)) = (sim.observe(src, 0.0)?, sim.observe(src, delta)?) {
                out.push(PerturbedPair { baseline, perturbed });
            }
        }
        sim.advance();
    }
    Ok(out)
}

pub fn perturbation_table(pairs: &[PerturbedPair]) -> Table {
    let mut t = Table::new([
        "t_s",
        "source_id",
        "baseline_target",
        "perturbed_target",
        "baseline_distance_m",
        "perturbed_distance_m",
        "baseline_secrecy",
        "perturbed_secrecy",
        "along_track_m",
    ]);
    t.rows = pairs
        .iter()
        .map(|p| {
            vec![
                Cell::Num(p.baseline.t),
                Cell::Text(p.baseline.source_id.clone()),
                Cell::Text(p.baseline.target_id.clone()),
                Cell::Text(p.perturbed.target_id.clone()),
                Cell::Num(p.baseline.distance),
                Cell::Num(p.perturbed.distance),
                Cell::Num(p.baseline.secrecy),
                Cell::Num(p.perturbed.secrecy),
                Cell::Num(p.baseline.along_track),
            ]
        })
        .collect();
    t
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ClusterRunOptions {
    pub interval_s: f64,
    pub rsc: f64,
    pub secondary_rsc: f64,
}

impl Default for ClusterRunOptions {
    fn default() -> Self {
        Self { interval_s: 1.0, rsc: 1.0, secondary_rsc: 0.5 }
    }
}

#[derive(Debug, Clone)]
pub struct ClusterRun {
    pub history: ClusterHistory,
    /// `t_s, source_id, cluster_id, members, pseudo`; cluster_id 0 when empty.
    pub table: Table,
}

/// Deterministic 17-character VIN for node `i`.
pub fn node_vin(i: usize) -> String {
    format!("VSCSIMHWY{i:08}")
}

/// Each interval, every source hears all nodes in range, scores them by VSC,
/// validates a fresh chain link from each and forms a cluster.
pub fn run_highway_cluster(world: &HighwayWorld, opts: &ClusterRunOptions) -> Result<ClusterRun> {
    if !(opts.interval_s > 0.0) {
        return Err(Error::Config(format!("interval_s = {}: must be positive", opts.interval_s)));
    }
    let mut sim = HighwaySim::new(world.clone())?;
    let every = ((opts.interval_s / world.dt_s).round() as usize).max(1);
    let epochs = world.steps().div_ceil(every) as u32;
    let chain_length = epochs + 1;
    let identities = (0..world.nodes)
        .map(|i| VehicleIdentity::new(node_id(i), &node_vin(i), chain_length, ChainHash::Sha256))
        .collect::<Result<Vec<_>>>()?;
    let mut engine = ClusterEngine::new(opts.rsc, opts.secondary_rsc)?;
    let mut table = Table::new(["t_s", "source_id", "cluster_id", "members", "pseudo"]);
    let mut epoch = 0u32;
    while !sim.finished() {
        sim.refresh_speeds()?;
        if sim.step.is_multiple_of(every) {
            let position = chain_length - 1 - epoch;
            for src in &world.sources {
                let si = sim.index_of(src)?;
                let here = sim.nodes[si].pos;
                let mut window = Vec::new();
                for (i, n) in sim.nodes.iter().enumerate() {
                    let d = distance(here, n.pos)?;
                    if i != si && d <= world.obu_range_m {
                        window.push((i, CsiRecord::new(n.id.clone(), sim.channel.snr_at(d)?, sim.time())?));
                    }
                }
                let records: Vec<CsiRecord> = window.iter().map(|(_, r)| r.clone()).collect();
                let candidates = window
                    .iter()
                    .map(|(i, r)| {
                        let identity = identities[*i].clone();
                        let proof = ChainProof { preimage: identity.preimage_at(position)?, position };
                        Ok(ClusterCandidate { identity, proof, vsc: compute_vsc(&records, &r.sender_id, VscOptions::default())?.vsc })
                    })
                    .collect::<Result<Vec<_>>>()?;
                let (formation, state) = engine.form(sim.time(), &candidates)?;
                let join = |ids: &mut dyn Iterator<Item = &String>| ids.cloned().collect::<Vec<_>>().join(";");
                table.push(vec![
                    Cell::Num(sim.time()),
                    Cell::Text(src.clone()),
                    Cell::Int(state.map_or(0, |s| s.cluster_id as i64)),
                    Cell::Text(join(&mut formation.members.keys())),
                    Cell::Text(join(&mut formation.pseudo.iter())),
                ])?;
            }
            epoch += 1;
        }
        sim.advance();
    }
    Ok(ClusterRun { history: engine.history().clone(), table })
}

/// Distinct target ids seen per source; handy for steady-state checks.
pub fn targets_seen(rows: &[Observation], source: &str) -> BTreeSet<String> {
    rows.iter().filter(|o| o.source_id == source).map(|o| o.target_id.clone()).collect()
}
