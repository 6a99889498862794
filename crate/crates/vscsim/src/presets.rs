//! Named, ready-to-run configurations.

use std::collections::BTreeMap;

use vscsim_core::scenarios::{HighwayConfig, RelayConfig, ScenarioConfig, UrbanConfig};
use vscsim_core::sim::{
    ClusterRunOptions, HighwayWorld, IntersectionLayout, PppRunSpec, SeriesSpec, SweepSpec, DEFAULT_DT_S,
    PERTURBATION_DELTA_M,
};

use crate::config::{Experiment, RunConfig};

pub struct Preset {
    pub name: &'static str,
    pub about: &'static str,
}

pub const PRESETS: &[Preset] = &[
    Preset { name: "fig4", about: "highway secrecy vs speed for three path-loss exponents" },
    Preset { name: "fig5", about: "highway secrecy at 80, 100 and 120 km/h, alpha 3.5" },
    Preset { name: "fig6", about: "highway secrecy vs speed for three transmit powers" },
    Preset { name: "fig7", about: "highway secrecy vs speed for three feedback delays" },
    Preset { name: "fig11", about: "urban fixed eavesdropper, R0 = 200 m" },
    Preset { name: "fig12", about: "urban fixed eavesdropper, R0 = 20 m" },
    Preset { name: "fig13", about: "urban fixed eavesdropper, R0 = 20 m at 80 dB" },
    Preset { name: "fig15", about: "urban moving eavesdropper, R0 = 20 m" },
    Preset { name: "fig17", about: "relay-assisted vs direct secrecy over relay power" },
    Preset { name: "fig19", about: "PPP eavesdropper snapshots at fractions of R_min" },
    Preset { name: "table1-case1", about: "intersection capacity trace, case 1" },
    Preset { name: "table1-case2", about: "intersection capacity trace, case 2" },
    Preset { name: "table1-case3", about: "intersection capacity trace, case 3" },
    Preset { name: "table1-case4", about: "intersection capacity trace, case 4" },
    Preset { name: "table1-case5", about: "intersection capacity trace, case 5" },
    Preset { name: "table1-case6", about: "intersection capacity trace, case 6" },
    Preset { name: "highway", about: "25-node highway, nearest-target secrecy per source" },
    Preset { name: "highway-cluster", about: "25-node highway with VSC cluster formation" },
    Preset { name: "perturbation", about: "highway secrecy with the source shifted by +5 m" },
    Preset { name: "ppp-demo", about: "Monte-Carlo PPP fields: colluding, non-colluding, avg, max" },
];

fn range(start: f64, stop: f64, step: f64) -> Vec<f64> {
    let n = ((stop - start) / step).round() as usize;
    (0..=n).map(|i| start + i as f64 * step).collect()
}

fn series(items: &[(&str, &str, f64)]) -> Vec<SeriesSpec> {
    items
        .iter()
        .map(|&(name, field, value)| SeriesSpec {
            name: name.into(),
            overrides: BTreeMap::from([(field.to_string(), value)]),
        })
        .collect()
}

fn highway(db: f64, alpha: f64, tau: f64) -> ScenarioConfig {
    ScenarioConfig::Highway(HighwayConfig {
        p_over_n0_db: db,
        alpha,
        r_m: 1000.0,
        v_kmh: 80.0,
        tau_s: tau,
        theta_rad: 0.1,
    })
}

fn urban(db: f64, r0: f64) -> UrbanConfig {
    UrbanConfig { p_over_n0_db: db, alpha: 2.0, lane_width_m: 3.0, v_limit_kmh: 30.0, t_s: 0.1, r0_m: r0 }
}

fn speed_sweep(scenario: ScenarioConfig, series: Vec<SeriesSpec>) -> Experiment {
    Experiment::Sweep(SweepSpec { scenario, param: "v_kmh".into(), grid: range(10.0, 120.0, 10.0), series })
}

fn urban_sweep(scenario: ScenarioConfig) -> Experiment {
    let alphas = series(&[("cs_alpha_2", "alpha", 2.0), ("cs_alpha_3", "alpha", 3.0), ("cs_alpha_4", "alpha", 4.0)]);
    Experiment::Sweep(SweepSpec { scenario, param: "v_limit_kmh".into(), grid: range(10.0, 60.0, 5.0), series: alphas })
}

fn intersection(case: u8) -> Experiment {
    Experiment::Intersection { case, dt_s: DEFAULT_DT_S, p_over_n0_db: 40.0, alpha: 2.0, layout: IntersectionLayout::default() }
}

pub fn names() -> impl Iterator<Item = &'static str> {
    PRESETS.iter().map(|p| p.name)
}

/// The preset's configuration, or `None` for an unknown name.
pub fn preset(name: &str) -> Option<RunConfig> {
    let exp = match name {
        "fig4" => speed_sweep(
            highway(70.0, 1.4, 0.2),
            series(&[("cs_alpha_1.4", "alpha", 1.4), ("cs_alpha_2", "alpha", 2.0), ("cs_alpha_4", "alpha", 4.0)]),
        ),
        "fig5" => Experiment::Sweep(SweepSpec {
            scenario: highway(70.0, 3.5, 0.2),
            param: "v_kmh".into(),
            grid: vec![80.0, 100.0, 120.0],
            series: series(&[("cs_alpha_3.5", "alpha", 3.5)]),
        }),
        "fig6" => speed_sweep(
            highway(40.0, 1.4, 0.4),
            series(&[("p_40db", "p_over_n0_db", 40.0), ("p_50db", "p_over_n0_db", 50.0), ("p_60db", "p_over_n0_db", 60.0)]),
        ),
        "fig7" => speed_sweep(
            highway(70.0, 1.4, 0.2),
            series(&[("tau_100ms", "tau_s", 0.1), ("tau_200ms", "tau_s", 0.2), ("tau_400ms", "tau_s", 0.4)]),
        ),
        "fig11" => urban_sweep(ScenarioConfig::UrbanFixed(urban(70.0, 200.0))),
        "fig12" => urban_sweep(ScenarioConfig::UrbanFixed(urban(70.0, 20.0))),
        "fig13" => urban_sweep(ScenarioConfig::UrbanFixed(urban(80.0, 20.0))),
        "fig15" => urban_sweep(ScenarioConfig::UrbanMoving(urban(70.0, 20.0))),
        "fig17" => Experiment::Sweep(SweepSpec {
            scenario: ScenarioConfig::Relay(RelayConfig {
                p_a: 100.0,
                p_r: 0.0,
                h_ab: 0.5,
                h_rb: 0.1,
                h_ae: 0.5,
                h_re: 1.0,
                sigma_b_sq: 1.0,
                sigma_e_sq: 1.0,
                bandwidth_hz: 1.0,
            }),
            param: "p_r".into(),
            grid: range(0.0, 100.0, 10.0),
            series: vec![
                SeriesSpec { name: "relay".into(), overrides: BTreeMap::new() },
                SeriesSpec { name: "direct".into(), overrides: BTreeMap::from([("h_rb".into(), 0.0), ("h_re".into(), 0.0)]) },
            ],
        }),
        "fig19" => Experiment::PppSnapshots(PppRunSpec::default()),
        "table1-case1" => intersection(1),
        "table1-case2" => intersection(2),
        "table1-case3" => intersection(3),
        "table1-case4" => intersection(4),
        "table1-case5" => intersection(5),
        "table1-case6" => intersection(6),
        "highway" => Experiment::Highway { world: HighwayWorld::default() },
        "highway-cluster" => {
            Experiment::HighwayCluster { world: HighwayWorld::default(), cluster: ClusterRunOptions::default() }
        }
        "perturbation" => Experiment::Perturbation {
            world: HighwayWorld::default(),
            delta_m: PERTURBATION_DELTA_M,
            allow_any_delta: false,
        },
        "ppp-demo" => Experiment::PppDemo(PppRunSpec::default()),
        _ => return None,
    };
    Some(RunConfig::new(name, exp))
}
