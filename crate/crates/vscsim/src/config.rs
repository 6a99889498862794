use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use vscsim_core::scenarios::ScenarioConfig;
use vscsim_core::sim::{ClusterRunOptions, HighwayWorld, IntersectionLayout, PppRunSpec, SweepSpec, DEFAULT_DT_S};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Base name of emitted files.
    #[serde(default = "default_name")]
    pub name: String,
    /// Overrides any seed inside the experiment.
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out_dir: Option<PathBuf>,
    #[serde(default)]
    pub emit: Emit,
    pub experiment: Experiment,
}

fn default_name() -> String {
    "run".into()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Emit {
    pub csv: bool,
    pub plot_data: bool,
}

impl Default for Emit {
    fn default() -> Self {
        Self { csv: true, plot_data: false }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Experiment {
    /// One analytic evaluation.
    Point { scenario: ScenarioConfig },
    Sweep(SweepSpec),
    Intersection {
        case: u8,
        #[serde(default = "default_dt")]
        dt_s: f64,
        #[serde(default = "default_intersection_db")]
        p_over_n0_db: f64,
        #[serde(default = "default_intersection_alpha")]
        alpha: f64,
        #[serde(default)]
        layout: IntersectionLayout,
    },
    Highway {
        #[serde(default)]
        world: HighwayWorld,
    },
    HighwayCluster {
        #[serde(default)]
        world: HighwayWorld,
        #[serde(default)]
        cluster: ClusterRunOptions,
    },
    Perturbation {
        #[serde(default)]
        world: HighwayWorld,
        #[serde(default = "default_delta")]
        delta_m: f64,
        #[serde(default)]
        allow_any_delta: bool,
    },
    PppSnapshots(PppRunSpec),
    PppDemo(PppRunSpec),
}

fn default_dt() -> f64 {
    DEFAULT_DT_S
}
fn default_intersection_db() -> f64 {
    40.0
}
fn default_intersection_alpha() -> f64 {
    2.0
}
fn default_delta() -> f64 {
    5.0
}

impl Experiment {
    pub fn kind(&self) -> &'static str {
        match self {
            Experiment::Point { .. } => "point",
            Experiment::Sweep(_) => "sweep",
            Experiment::Intersection { .. } => "intersection",
            Experiment::Highway { .. } => "highway",
            Experiment::HighwayCluster { .. } => "highway_cluster",
            Experiment::Perturbation { .. } => "perturbation",
            Experiment::PppSnapshots(_) => "ppp_snapshots",
            Experiment::PppDemo(_) => "ppp_demo",
        }
    }

    /// Core module that executes this experiment, for diagnostics.
    pub fn module(&self) -> &'static str {
        match self {
            Experiment::Point { .. } => "analytic-scenarios",
            Experiment::Sweep(_) => "sim-harness/sweep",
            Experiment::Intersection { .. } => "sim-harness/intersection",
            Experiment::Highway { .. } | Experiment::Perturbation { .. } => "sim-harness/highway",
            Experiment::HighwayCluster { .. } => "security-cluster",
            Experiment::PppSnapshots(_) | Experiment::PppDemo(_) => "stochastic-eavesdroppers",
        }
    }
}

fn prefixed(prefix: &str, items: Vec<String>) -> impl Iterator<Item = String> + '_ {
    items.into_iter().map(move |v| format!("{prefix}.{v}"))
}

impl RunConfig {
    pub fn new(name: impl Into<String>, experiment: Experiment) -> Self {
        Self { name: name.into(), seed: 0, out_dir: None, emit: Emit::default(), experiment }
    }

    /// Every range violation in the document.
    pub fn violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        if self.name.is_empty() || self.name.contains(['/', '\\']) {
            v.push(format!("name = {:?}: must be a non-empty file stem", self.name));
        }
        if !self.emit.csv && !self.emit.plot_data {
            v.push("emit: at least one of csv and plot_data must be set".into());
        }
        match &self.experiment {
            Experiment::Point { scenario } => v.extend(prefixed("experiment.scenario", scenario.violations())),
            Experiment::Sweep(s) => {
                v.extend(prefixed("experiment.scenario", s.scenario.violations()));
                v.extend(prefixed("experiment", s.violations()));
            }
            Experiment::Intersection { case, dt_s, p_over_n0_db, alpha, layout } => {
                if !(1..=6).contains(case) {
                    v.push(format!("experiment.case = {case}: must be 1..=6"));
                }
                if !(*dt_s > 0.0 && dt_s.is_finite()) {
                    v.push(format!("experiment.dt_s = {dt_s}: must be > 0"));
                }
                if !p_over_n0_db.is_finite() {
                    v.push(format!("experiment.p_over_n0_db = {p_over_n0_db}: must be finite"));
                }
                if !(*alpha > 0.0 && alpha.is_finite()) {
                    v.push(format!("experiment.alpha = {alpha}: must be > 0"));
                }
                if let Err(e) = layout.validate() {
                    v.push(format!("experiment.layout: {e}"));
                }
            }
            Experiment::Highway { world } => v.extend(prefixed("experiment.world", world.violations())),
            Experiment::HighwayCluster { world, cluster } => {
                v.extend(prefixed("experiment.world", world.violations()));
                if !(cluster.interval_s > 0.0) {
                    v.push(format!("experiment.cluster.interval_s = {}: must be > 0", cluster.interval_s));
                }
                if !(cluster.secondary_rsc <= cluster.rsc) {
                    v.push(format!(
                        "experiment.cluster.secondary_rsc = {}: must not exceed rsc = {}",
                        cluster.secondary_rsc, cluster.rsc
                    ));
                }
            }
            Experiment::Perturbation { world, delta_m, allow_any_delta } => {
                v.extend(prefixed("experiment.world", world.violations()));
                if !(*allow_any_delta || *delta_m == 0.0 || delta_m.abs() == 5.0) {
                    v.push(format!("experiment.delta_m = {delta_m}: must be 0 or ±5 unless allow_any_delta is set"));
                }
            }
            Experiment::PppSnapshots(s) | Experiment::PppDemo(s) => {
                v.extend(prefixed("experiment", s.violations()))
            }
        }
        v
    }

    /// SHA-256 of the canonical JSON form, output directory excluded.
    pub fn hash(&self) -> String {
        let canon = RunConfig { out_dir: None, ..self.clone() };
        hex::encode(Sha256::digest(serde_json::to_vec(&canon).expect("config serializes")))
    }

    /// Pushes the top-level seed into seeded experiments.
    pub fn apply_seed(&mut self, seed: u64) {
        self.seed = seed;
        match &mut self.experiment {
            Experiment::Highway { world }
            | Experiment::HighwayCluster { world, .. }
            | Experiment::Perturbation { world, .. } => world.seed = seed,
            Experiment::PppSnapshots(s) | Experiment::PppDemo(s) => s.seed = seed,
            Experiment::Point { .. } | Experiment::Sweep(_) | Experiment::Intersection { .. } => {}
        }
    }
}

#[derive(Debug)]
pub struct ConfigError {
    pub path: PathBuf,
    pub problems: Vec<String>,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cli-io: invalid config {}", self.path.display())?;
        for p in &self.problems {
            write!(f, "\n  - {p}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ConfigError {}

pub fn parse_config(text: &str, path: &Path) -> Result<RunConfig, ConfigError> {
    let err = |problems| ConfigError { path: path.to_path_buf(), problems };
    let mut cfg: RunConfig = serde_json::from_str(text).map_err(|e| err(vec![e.to_string()]))?;
    let problems = cfg.violations();
    if !problems.is_empty() {
        return Err(err(problems));
    }
    let seed = cfg.seed;
    cfg.apply_seed(seed);
    Ok(cfg)
}

pub fn load_config(path: &Path) -> Result<RunConfig, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError { path: path.to_path_buf(), problems: vec![format!("cannot read file: {e}")] })?;
    parse_config(&text, path)
}
