use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use vscsim::{parse_csv, parse_plot_data, PRESETS};
use vscsim_core::cluster::ClusterHistory;

fn table_comment(csv: &str) -> Option<&str> {
    csv.lines().next().filter(|l| l.starts_with('#'))
}

fn vscsim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vscsim"))
        .args(args)
        .env_remove("VSCSIM_OUT")
        .output()
        .expect("binary runs")
}

fn ok(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

fn preset_csv(name: &str, dir: &Path, extra: &[&str]) -> String {
    let d = dir.to_str().unwrap();
    let mut args = vec!["preset", name, "--out", d];
    args.extend(extra);
    ok(&vscsim(&args));
    fs::read_to_string(dir.join(format!("{name}.csv"))).unwrap()
}

#[test]
fn fig4_matches_golden() {
    let dir = tempfile::tempdir().unwrap();
    let got = parse_csv(&preset_csv("fig4", dir.path(), &[])).unwrap();
    let want = parse_csv(&fs::read_to_string(golden("fig4.csv")).unwrap()).unwrap();
    assert_eq!(got.columns, ["v_kmh", "cs_alpha_1.4", "cs_alpha_2", "cs_alpha_4"]);
    assert_eq!(got.columns, want.columns);
    assert_eq!(got.rows.len(), 12);
    for col in &want.columns {
        for (g, w) in got.column(col).unwrap().iter().zip(want.column(col).unwrap()) {
            assert!((g - w).abs() <= 1e-12 * w.abs(), "{col}: {g} vs {w}");
        }
    }
    assert!(got.comments[0].starts_with("vscsim ") && got.comments[0].contains("config_hash="));
    assert!(got.comments[0].ends_with("seed=0"));
}

#[test]
fn same_seed_same_bytes() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    assert_eq!(preset_csv("fig19", a.path(), &["--seed", "9"]), preset_csv("fig19", b.path(), &["--seed", "9"]));
    let c = tempfile::tempdir().unwrap();
    let other = preset_csv("fig19", c.path(), &["--seed", "10"]);
    assert_ne!(fs::read_to_string(a.path().join("fig19.csv")).unwrap(), other);
    assert!(other.lines().next().unwrap().ends_with("seed=10"));
}

#[test]
fn list_presets_names_everything() {
    let out = ok(&vscsim(&["list-presets"]));
    for p in PRESETS {
        assert!(out.lines().any(|l| l.split_whitespace().next() == Some(p.name)), "{}", p.name);
    }
    for required in ["fig4", "fig19", "table1-case6", "highway-cluster", "perturbation", "ppp-demo"] {
        assert!(out.contains(required));
    }
}

#[test]
fn unknown_preset_fails() {
    let out = vscsim(&["preset", "fig99"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown preset"));
}

#[test]
fn validate_reports_every_bad_field() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    fs::write(
        &path,
        r#"{"name": "bad", "experiment": {"kind": "point", "scenario":
            {"kind": "highway", "p_over_n0_db": 70, "alpha": -2, "v_kmh": 80, "tau_s": -1}}}"#,
    )
    .unwrap();
    let out = vscsim(&["validate", path.to_str().unwrap()]);
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("alpha = -2") && err.contains("tau_s = -1"), "{err}");
    assert!(err.contains("cli-io:"));
}

#[test]
fn validate_rejects_unknown_keys_and_missing_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("typo.json");
    fs::write(&path, r#"{"experiment": {"kind": "highway"}, "sed": 3}"#).unwrap();
    let out = vscsim(&["validate", path.to_str().unwrap()]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("sed"));
    assert!(!vscsim(&["validate", "/nonexistent.json"]).status.success());
}

#[test]
fn run_config_with_plot_data() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("relay.json");
    fs::write(
        &cfg,
        r#"{"name": "relay", "emit": {"csv": true, "plot_data": true},
            "experiment": {"kind": "sweep", "param": "p_r", "grid": [0, 5, 10],
              "scenario": {"kind": "relay", "p_a": 100, "p_r": 0, "h_ab": 0.5, "h_rb": 0.1, "h_ae": 0.5, "h_re": 1}}}"#,
    )
    .unwrap();
    let out_dir = dir.path().join("o");
    let printed = ok(&vscsim(&["run", "--config", cfg.to_str().unwrap(), "--out", out_dir.to_str().unwrap()]));
    assert_eq!(printed.lines().count(), 2);
    let csv = parse_csv(&fs::read_to_string(out_dir.join("relay.csv")).unwrap()).unwrap();
    let dat = parse_plot_data(&fs::read_to_string(out_dir.join("relay.dat")).unwrap()).unwrap();
    assert_eq!(csv.columns, dat.columns);
    for (a, b) in csv.column("cs").unwrap().iter().zip(dat.column("cs").unwrap()) {
        assert!((a - b).abs() <= 1e-8 * a.abs().max(1e-300));
    }
}

#[test]
fn env_out_dir_is_used_when_no_flag() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_vscsim"))
        .args(["preset", "table1-case2"])
        .env("VSCSIM_OUT", dir.path())
        .output()
        .unwrap();
    ok(&out);
    assert!(dir.path().join("table1-case2.csv").exists());
}

#[test]
fn highway_cluster_writes_history() {
    let dir = tempfile::tempdir().unwrap();
    let csv = preset_csv("highway-cluster", dir.path(), &[]);
    let table = parse_csv(&csv).unwrap();
    assert_eq!(table.columns, ["t_s", "source_id", "cluster_id", "members", "pseudo"]);
    let hist = fs::read_to_string(dir.path().join("highway-cluster_history.ndjson")).unwrap();
    let mut lines = hist.lines();
    assert_eq!(lines.next(), table_comment(&csv));
    assert!(lines.clone().count() > 0 && lines.all(|l| l.starts_with('{')));
    let history = ClusterHistory::read_ndjson(hist.as_bytes()).unwrap();
    assert!(!history.records().is_empty());
}

#[test]
fn missing_config_argument() {
    let out = vscsim(&["run"]);
    assert!(!out.status.success());
}
