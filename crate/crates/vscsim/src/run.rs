use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use vscsim_core::channel::ChannelParams;
use vscsim_core::sim::{
    observations_table, perturbation_table, run_highway_cluster, run_highway_experiment, run_intersection_with,
    run_perturbation_study, run_ppp_demo, run_ppp_snapshots, run_sweep, Cell, Table,
};

use crate::config::{Experiment, RunConfig};
use crate::output::{provenance_line, render_csv, render_plot_data, write_file};

/// Everything a run produced, before anything touches the disk.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub table: Table,
    /// NDJSON cluster history, for highway-cluster runs.
    pub history: Option<String>,
}

pub fn execute(cfg: &RunConfig) -> Result<RunOutput> {
    let exp = &cfg.experiment;
    let ctx = || format!("{}: {} experiment {:?} failed", exp.module(), exp.kind(), cfg.name);
    let mut history = None;
    let table = match exp {
        Experiment::Point { scenario } => {
            let cs = scenario.resolve().and_then(|s| s.secrecy()).with_context(ctx)?;
            let mut t = Table::new(["scenario", "secrecy"]);
            t.push(vec![Cell::Text(scenario.kind().into()), Cell::Num(cs)])?;
            t
        }
        Experiment::Sweep(spec) => run_sweep(spec).with_context(ctx)?,
        Experiment::Intersection { case, dt_s, p_over_n0_db, alpha, layout } => {
            let channel = ChannelParams::from_db(*p_over_n0_db, *alpha).with_context(ctx)?;
            run_intersection_with(*case, *dt_s, channel, layout).with_context(ctx)?.to_table()
        }
        Experiment::Highway { world } => observations_table(&run_highway_experiment(world).with_context(ctx)?),
        Experiment::HighwayCluster { world, cluster } => {
            let run = run_highway_cluster(world, cluster).with_context(ctx)?;
            let mut buf = Vec::new();
            run.history.write_ndjson(&mut buf).with_context(ctx)?;
            history = Some(String::from_utf8(buf).expect("NDJSON is UTF-8"));
            run.table
        }
        Experiment::Perturbation { world, delta_m, allow_any_delta } => {
            perturbation_table(&run_perturbation_study(world, *delta_m, *allow_any_delta).with_context(ctx)?)
        }
        Experiment::PppSnapshots(spec) => run_ppp_snapshots(spec).with_context(ctx)?,
        Experiment::PppDemo(spec) => run_ppp_demo(spec).with_context(ctx)?,
    };
    Ok(RunOutput { table, history })
}

/// `--out`, then the config's `out_dir`, then `VSCSIM_OUT`, then `out`.
pub fn resolve_out_dir(flag: Option<&Path>, cfg: &RunConfig, env: Option<&Path>) -> PathBuf {
    flag.or(cfg.out_dir.as_deref()).or(env).unwrap_or(Path::new("out")).to_path_buf()
}

/// Runs and writes the requested files; returns their paths.
pub fn run_to_dir(cfg: &RunConfig, out_dir: &Path) -> Result<Vec<PathBuf>> {
    let out = execute(cfg)?;
    let prov = provenance_line(&cfg.hash(), cfg.seed);
    let mut written = Vec::new();
    let mut emit = |file: String, body: String| -> Result<()> {
        let path = out_dir.join(file);
        write_file(&path, &body)?;
        written.push(path);
        Ok(())
    };
    if cfg.emit.csv {
        emit(format!("{}.csv", cfg.name), render_csv(&out.table, &prov))?;
    }
    if cfg.emit.plot_data {
        emit(format!("{}.dat", cfg.name), render_plot_data(&out.table, &prov))?;
    }
    if let Some(h) = out.history {
        emit(format!("{}_history.ndjson", cfg.name), format!("{prov}\n{h}"))?;
    }
    Ok(written)
}
