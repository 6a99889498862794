//! Time-stepped harness: intersection cases, the highway node experiment,
//! the position-shift perturbation study, PPP runs and parameter sweeps.

mod highway;
mod intersection;
mod ppp_runs;
mod sweep;
mod table;
mod trajectory;

pub use highway::{
    node_id, node_vin, observations_table, perturbation_table, run_highway_cluster, run_highway_experiment,
    run_perturbation_study, targets_seen, ClusterRun, ClusterRunOptions, HighwaySim, HighwayWorld, Layout, Node,
    Observation, PerturbedPair, PERTURBATION_DELTA_M,
};
pub use intersection::{
    intersection_channel, run_intersection_case, run_intersection_with, IntersectionLayout, IntersectionRun,
    IntersectionSample, NEAR_ZERO_FRACTION,
};
pub use ppp_runs::{run_ppp_demo, run_ppp_snapshots, PppRunSpec};
pub use sweep::{run_sweep, SeriesSpec, SweepSpec};
pub use table::{Cell, Table};
pub use trajectory::Trajectory;

/// Default time step, s.
pub const DEFAULT_DT_S: f64 = 0.1;
