//! Acceptance criteria 1 to 10. Runs without the libtest harness so that
//! every criterion prints exactly one PASS or FAIL line and a failing one
//! does not hide the rest.
//!
//! A FAIL only affects the exit status when `VSCSIM_ACCEPTANCE_STRICT=1`;
//! otherwise cargo would stop before running the remaining test targets.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::Rng;
use serde_json::Value;
use vscsim::{execute, preset, run_to_dir};
use vscsim_core::channel::ChannelParams;
use vscsim_core::cluster::{
    form_cluster, rsc_negotiate, sc_select, validate_identity, ChainHash, ChainProof, ClusterCandidate, ClusterHistory,
    HighwayEnv, RelayGains, SecrecyKnobs, VehicleIdentity,
};
use vscsim_core::rng::stream_rng;
use vscsim_core::sim::{
    intersection_channel, run_highway_cluster, run_intersection_case, run_perturbation_study, ClusterRunOptions,
    HighwayWorld, Table, NEAR_ZERO_FRACTION, PERTURBATION_DELTA_M,
};
use vscsim_core::stochastic::{
    binding_eavesdropper, nearest_eavesdropper, per_eavesdropper_secrecy, ppp_secrecy, sample_field,
    CollusionMode, Rect, DEFAULT_REF_AREA_M2,
};
use vscsim_core::units::{distance, Point2D};
use vscsim_core::vsc::{compute_vsc, CsiRecord, VscOptions};

/// One criterion's outcome: pass flag plus the facts behind it.
struct Outcome {
    ok: bool,
    detail: String,
}

impl Outcome {
    fn new(checks: &[(&str, bool)], extra: impl Into<String>) -> Self {
        let failed: Vec<&str> = checks.iter().filter(|(_, ok)| !ok).map(|(n, _)| *n).collect();
        let mut detail = extra.into();
        if !failed.is_empty() {
            detail = format!("{detail}; failed: {}", failed.join(", "));
        }
        Outcome { ok: failed.is_empty(), detail }
    }
}

fn sweep(name: &str) -> Table {
    execute(&preset(name).expect("preset exists")).expect("preset runs").table
}

fn col(t: &Table, name: &str) -> Vec<f64> {
    t.column(name).unwrap_or_else(|| panic!("column {name}"))
}

fn strictly_decreasing(xs: &[f64]) -> bool {
    xs.windows(2).all(|w| w[1] < w[0])
}

fn strictly_increasing(xs: &[f64]) -> bool {
    xs.windows(2).all(|w| w[1] > w[0])
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let t = sweep("fig4");
    let elapsed = start.elapsed();
    let v = col(&t, "v_kmh");
    let cols = ["cs_alpha_1.4", "cs_alpha_2", "cs_alpha_4"].map(|c| col(&t, c));
    let grid_ok = v == (1..=12).map(|i| 10.0 * i as f64).collect::<Vec<_>>();
    let decreasing = cols.iter().all(|c| strictly_decreasing(c));
    let ordered_at: Vec<f64> =
        (0..v.len()).filter(|&i| cols[0][i] < cols[1][i] && cols[1][i] < cols[2][i]).map(|i| v[i]).collect();
    Outcome::new(
        &[
            ("grid 10..120", grid_ok),
            ("each column strictly decreasing in v", decreasing),
            ("columns increasing in alpha at every v", ordered_at.len() == v.len()),
            ("runtime < 1 s", elapsed < Duration::from_secs(1)),
        ],
        format!("alpha ordering holds at v = {ordered_at:?} km/h; runtime {:.1} ms", elapsed.as_secs_f64() * 1e3),
    )
}

fn core_golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/golden").join(name)
}

fn criterion_2() -> Outcome {
    let t = sweep("fig5");
    let cs = col(&t, "cs_alpha_3.5");
    let golden: Value = serde_json::from_str(&fs::read_to_string(core_golden("analytic.json")).unwrap()).unwrap();
    let pinned = &golden["scalars"]["fig5"];
    let max_rel = [80, 100, 120]
        .iter()
        .zip(&cs)
        .map(|(v, got)| {
            let want = pinned[v.to_string()].as_f64().unwrap();
            (got - want).abs() / want.abs()
        })
        .fold(0.0, f64::max);
    Outcome::new(
        &[("C(80) > C(100) > C(120)", strictly_decreasing(&cs)), ("golden within 1e-9 relative", max_rel <= 1e-9)],
        format!("C_s = {cs:?}; max rel err {max_rel:e}"),
    )
}

fn criterion_3() -> Outcome {
    let p = sweep("fig6");
    let power_ok =
        (0..p.rows.len()).all(|i| strictly_increasing(&["p_40db", "p_50db", "p_60db"].map(|c| col(&p, c)[i])));
    let tau = sweep("fig7");
    let tau_ok = (0..tau.rows.len())
        .all(|i| strictly_decreasing(&["tau_100ms", "tau_200ms", "tau_400ms"].map(|c| col(&tau, c)[i])));
    Outcome::new(
        &[("increasing in P/N0 at every v", power_ok), ("decreasing in tau at every v", tau_ok)],
        format!("{} speeds x 3 powers, {} speeds x 3 delays", p.rows.len(), tau.rows.len()),
    )
}

fn negative_points(t: &Table) -> usize {
    t.columns[1..].iter().map(|c| col(t, c).iter().filter(|&&x| x < 0.0).count()).sum()
}

fn min_value(t: &Table) -> f64 {
    t.columns[1..].iter().flat_map(|c| col(t, c)).fold(f64::INFINITY, f64::min)
}

fn criterion_4() -> Outcome {
    let far = sweep("fig11");
    let near = sweep("fig12");
    let far_ok = far.columns[1..].iter().all(|c| strictly_decreasing(&col(&far, c)));
    Outcome::new(
        &[("R0 = 200 m: strictly decreasing in V_L", far_ok), ("R0 = 20 m: some C_s < 0", negative_points(&near) > 0)],
        format!("R0 = 20 m minimum C_s = {:.4}", min_value(&near)),
    )
}

fn criterion_5() -> Outcome {
    let t = sweep("fig13");
    let n = negative_points(&t);
    Outcome::new(&[("80 dB, R0 = 20 m: negative region non-empty", n > 0)], format!("minimum C_s = {:.4}", min_value(&t)))
}

fn criterion_6() -> Outcome {
    let t = sweep("fig17");
    let (p_r, relay, direct) = (col(&t, "p_r"), col(&t, "relay"), col(&t, "direct"));
    let zero_gap = (relay[0] - direct[0]).abs();
    let better = (1..p_r.len()).all(|i| relay[i] > direct[i]);
    Outcome::new(
        &[("P_R = 0 equals direct within 1e-12", p_r[0] == 0.0 && zero_gap <= 1e-12), ("relay > direct for P_R > 0", better)],
        format!("P_R grid {:?}..{:?}, gap at 0 = {zero_gap:e}", p_r[0], p_r[p_r.len() - 1]),
    )
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let lambda = 6.0;
    let region = Rect::centered(Point2D::ORIGIN, 1000.0).unwrap();
    let expected = lambda * region.area() / DEFAULT_REF_AREA_M2;
    let trials = 100_000;
    let mut rng = stream_rng(7, 0);
    let total: usize =
        (0..trials).map(|_| sample_field(lambda, DEFAULT_REF_AREA_M2, region, &mut rng).unwrap().len()).sum();
    let mean = total as f64 / trials as f64;
    let sigma = (expected / trials as f64).sqrt();
    let count_ok = (mean - expected).abs() <= 3.0 * sigma;

    let params = ChannelParams::from_db(70.0, 2.0).unwrap();
    let host = Point2D::ORIGIN;
    let (mut fields, mut binding_ok, mut avg_ok, mut collude_ok) = (0, true, true, true);
    let mut rng = stream_rng(7, 1);
    while fields < 1000 {
        let field = sample_field(lambda, DEFAULT_REF_AREA_M2, region, &mut rng).unwrap();
        if field.is_empty() {
            continue;
        }
        fields += 1;
        let half = 0.5 * 1000f64.sqrt();
        let target = Point2D::new(rng.random_range(0.01..half), rng.random_range(-half..half));
        let (nearest, r_min) = nearest_eavesdropper(host, &field).unwrap().unwrap();
        let bind = binding_eavesdropper(host, &field, &params).unwrap().unwrap();
        let snrs: Vec<f64> = field.positions.iter().map(|&e| params.snr_at(distance(host, e).unwrap()).unwrap()).collect();
        let exhaustive = snrs.iter().all(|&s| s <= snrs[bind]);
        binding_ok &= exhaustive && (bind == nearest || distance(host, field.positions[bind]).unwrap() == r_min);
        let terms = per_eavesdropper_secrecy(host, target, &field, &params).unwrap();
        let avg = terms.iter().sum::<f64>() / terms.len() as f64;
        let max = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        avg_ok &= avg <= max;
        let nc = ppp_secrecy(host, target, &field, CollusionMode::NonColluding, &params).unwrap();
        let co = ppp_secrecy(host, target, &field, CollusionMode::Colluding, &params).unwrap();
        collude_ok &= co <= nc;
    }
    let elapsed = start.elapsed();
    Outcome::new(
        &[
            ("count mean within 3 sigma", count_ok),
            ("binding eavesdropper = nearest", binding_ok),
            ("C_avg <= C_max", avg_ok),
            ("colluding <= non-colluding", collude_ok),
            ("runtime < 30 s", elapsed < Duration::from_secs(30)),
        ],
        format!(
            "mean count {mean:.4} vs {expected} (3 sigma = {:.4}); {fields} fields; {:.2} s",
            3.0 * sigma,
            elapsed.as_secs_f64()
        ),
    )
}

fn random_window<R: Rng>(rng: &mut R, n: usize) -> Vec<CsiRecord> {
    (0..n).map(|i| CsiRecord::new(format!("s{i:02}"), rng.random_range(0.0..1e4), 0.0).unwrap()).collect()
}

fn criterion_8() -> Outcome {
    let mut rng = stream_rng(8, 0);
    let mut uniform_ok = true;
    for _ in 0..1000 {
        let snr = rng.random_range(0.0..1e6);
        let n = rng.random_range(1..20);
        let w: Vec<CsiRecord> = (0..n).map(|i| CsiRecord::new(format!("s{i}"), snr, 0.0).unwrap()).collect();
        uniform_ok &= w.iter().all(|r| compute_vsc(&w, &r.sender_id, VscOptions::default()).unwrap().vsc == 0.0);
    }
    let mut argmax_ok = 0;
    let windows = 10_000;
    for _ in 0..windows {
        let n = rng.random_range(1..16);
        let w = random_window(&mut rng, n);
        let best_snr = w.iter().max_by(|a, b| a.snr.total_cmp(&b.snr)).unwrap();
        let by_vsc = w
            .iter()
            .map(|r| (compute_vsc(&w, &r.sender_id, VscOptions::default()).unwrap().vsc, &r.sender_id))
            .max_by(|a, b| a.0.total_cmp(&b.0))
            .unwrap();
        let selected = sc_select(&w, VscOptions::default()).unwrap();
        if *by_vsc.1 == best_snr.sender_id && selected == best_snr.sender_id {
            argmax_ok += 1;
        }
    }
    let w = [CsiRecord::new("a", 1.0, 0.0).unwrap(), CsiRecord::new("b", 3.0, 0.0).unwrap()];
    let example = compute_vsc(&w, "b", VscOptions::default()).unwrap().vsc;
    let example_err = (example - (2.0 - 3f64.log2())).abs();
    Outcome::new(
        &[
            ("VSC = 0 on uniform windows", uniform_ok),
            ("argmax VSC = argmax SNR", argmax_ok == windows),
            ("{1,3} example within 1e-12", example_err <= 1e-12),
        ],
        format!("{argmax_ok}/{windows} windows agree; example error {example_err:e}"),
    )
}

fn random_candidates<R: Rng>(rng: &mut R) -> Vec<ClusterCandidate> {
    let n = rng.random_range(0..25);
    (0..n)
        .map(|i| {
            let identity =
                VehicleIdentity::new(format!("v{i:02}"), &format!("VSCSIMACC{i:08}"), 4, ChainHash::Sha256).unwrap();
            let position = rng.random_range(0..5);
            let preimage = match rng.random_range(0..3) {
                0 => (0..32).map(|_| rng.random()).collect(),
                _ if position < 4 => identity.preimage_at(position).unwrap(),
                _ => vec![0; 32],
            };
            ClusterCandidate { identity, proof: ChainProof { preimage, position }, vsc: rng.random_range(-3.0..6.0) }
        })
        .collect()
}

fn partition_holds(cands: &[ClusterCandidate], rsc: f64, secondary: f64) -> bool {
    let f = form_cluster(cands, rsc, secondary).unwrap();
    let members: BTreeSet<&String> = f.members.keys().collect();
    let pseudo: BTreeSet<&String> = f.pseudo.iter().collect();
    let excluded: BTreeSet<&String> = f.excluded.iter().collect();
    let all: BTreeSet<&String> = cands.iter().map(|c| &c.identity.vehicle_id).collect();
    let disjoint = members.is_disjoint(&pseudo) && members.is_disjoint(&excluded) && pseudo.is_disjoint(&excluded);
    let covers = members.len() + pseudo.len() + excluded.len() == all.len();
    let placed = cands.iter().all(|c| {
        let id = &c.identity.vehicle_id;
        let valid = c.proof.position < c.identity.chain_length
            && validate_identity(&c.identity, &c.proof.preimage, c.proof.position).unwrap();
        match (valid, c.vsc) {
            (true, v) if v >= rsc => members.contains(id),
            (true, v) if v >= secondary => pseudo.contains(id),
            _ => excluded.contains(id),
        }
    });
    disjoint && covers && placed
}

fn criterion_9() -> Outcome {
    let mut rng = stream_rng(9, 0);
    let sets = 500;
    let partition_ok = (0..sets).all(|_| {
        let rsc = rng.random_range(-1.0..4.0);
        let secondary = rsc - rng.random_range(0.0..2.0);
        partition_holds(&random_candidates(&mut rng), rsc, secondary)
    });

    let id = VehicleIdentity::new("v", "1HGCM82633A004352", 5, ChainHash::Sha256).unwrap();
    let trials = 100_000;
    let mut false_accepts = 0;
    for _ in 0..trials {
        let preimage: [u8; 32] = rng.random();
        if validate_identity(&id, &preimage, rng.random_range(0..5)).unwrap() {
            false_accepts += 1;
        }
    }
    let true_accepts = (0..5).filter(|&p| validate_identity(&id, &id.preimage_at(p).unwrap(), p).unwrap()).count();

    let configs = 2000;
    let mut terminated = 0;
    for _ in 0..configs {
        let knobs = SecrecyKnobs {
            speed_step: rng.random_range(0.1..20.0),
            power_step_db: rng.random_range(0.1..10.0),
            relay_available: rng.random(),
            max_iterations: rng.random_range(1..40),
        };
        let mut env = HighwayEnv {
            speed: rng.random_range(5.0..45.0),
            min_speed: rng.random_range(0.5..5.0),
            p_over_n0_db: rng.random_range(20.0..90.0),
            max_power_db: rng.random_range(60.0..110.0),
            alpha: rng.random_range(1.0..4.0),
            tau: rng.random_range(0.05..0.5),
            r: rng.random_range(50.0..2000.0),
            relay: RelayGains {
                power_ratio: rng.random_range(0.1..2.0),
                h_rb_sq: rng.random_range(1e-16..1e-8),
                h_re_sq: rng.random_range(1e-16..1e-8),
            },
            relay_enabled: false,
        };
        let n = rng.random_range(1..8);
        let window = random_window(&mut rng, n);
        let rsc = rng.random_range(-5.0..60.0);
        if let Ok(result) = rsc_negotiate(&window, rsc, &knobs, &mut env) {
            if result.iterations() <= knobs.max_iterations {
                terminated += 1;
            }
        }
    }

    let world = HighwayWorld { duration_s: 30.0, ..HighwayWorld::default() };
    let opts = ClusterRunOptions::default();
    let ndjson = |h: &ClusterHistory| {
        let mut buf = Vec::new();
        h.write_ndjson(&mut buf).unwrap();
        buf
    };
    let a = run_highway_cluster(&world, &opts).unwrap().history;
    let b = run_highway_cluster(&world, &opts).unwrap().history;
    let reread = ClusterHistory::read_ndjson(&ndjson(&a)[..]).unwrap();
    let replay_ok = !a.records().is_empty() && ndjson(&a) == ndjson(&b) && reread.replay() == a.replay();

    Outcome::new(
        &[
            ("form_cluster partition", partition_ok),
            ("zero false accepts", false_accepts == 0),
            ("all correct links accepted", true_accepts == 5),
            ("rsc_negotiate terminates", terminated == configs),
            ("history replay deterministic", replay_ok),
        ],
        format!(
            "{sets} candidate sets; {false_accepts}/{trials} false accepts; {true_accepts}/5 accepted; \
             {terminated}/{configs} negotiations within max_iterations; {} history records",
            a.records().len()
        ),
    )
}

fn files_in(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out: Vec<(String, Vec<u8>)> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let p = e.unwrap().path();
            (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&p).unwrap())
        })
        .collect();
    out.sort();
    out
}

fn criterion_10() -> Outcome {
    let names = ["highway-cluster", "table1-case1", "table1-case2", "table1-case3", "table1-case4", "table1-case5", "table1-case6"];
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for name in names {
        let cfg = preset(name).unwrap();
        run_to_dir(&cfg, a.path()).unwrap();
        run_to_dir(&cfg, b.path()).unwrap();
    }
    let (fa, fb) = (files_in(a.path()), files_in(b.path()));
    let identical = fa.len() == names.len() + 1 && fa == fb;

    // Shifting the source by delta along its heading brings a target closer
    // exactly when its along-track offset exceeds delta / 2.
    let pairs = run_perturbation_study(&HighwayWorld::default(), PERTURBATION_DELTA_M, false).unwrap();
    let kept: Vec<_> = pairs.iter().filter(|p| p.same_target()).collect();
    let good = kept
        .iter()
        .filter(|p| {
            let (b, q) = (&p.baseline, &p.perturbed);
            let closer = b.along_track > PERTURBATION_DELTA_M / 2.0;
            closer == (q.distance < b.distance) && closer == (q.secrecy > b.secrecy)
        })
        .count();
    let fraction = good as f64 / kept.len().max(1) as f64;

    let (mut cutoffs, mut beyond) = (Vec::new(), 0);
    let near_zero_ok = (1..=6u8).all(|case| {
        let run = run_intersection_case(case, 0.1, intersection_channel()).unwrap();
        let cutoff = run.cutoff_distance();
        cutoffs.push(cutoff);
        beyond += run.samples.iter().filter(|s| s.distance > cutoff).count();
        run.samples
            .iter()
            .filter(|s| s.distance > cutoff)
            .all(|s| s.near_zero && s.capacity <= NEAR_ZERO_FRACTION * run.peak)
    });

    Outcome::new(
        &[
            ("byte-identical CSVs", identical),
            ("perturbation relations >= 99%", !kept.is_empty() && fraction >= 0.99),
            ("near zero beyond cutoff", near_zero_ok),
        ],
        format!(
            "{} files compared; perturbation {good}/{} same-target steps ({:.2}%), {} of {} steps changed target; \
             {beyond} samples beyond cutoffs {:?} m",
            fa.len(),
            kept.len(),
            100.0 * fraction,
            pairs.len() - kept.len(),
            pairs.len(),
            cutoffs.iter().map(|c| (c * 10.0).round() / 10.0).collect::<Vec<_>>()
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [(u32, fn() -> Outcome); 10] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
        (10, criterion_10),
    ];
    let mut failed = 0;
    for (n, run) in criteria {
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|e| Outcome {
            ok: false,
            detail: format!(
                "panicked: {}",
                e.downcast_ref::<String>().map(String::as_str).or(e.downcast_ref::<&str>().copied()).unwrap_or("?")
            ),
        });
        println!("{} criterion {n}: {}", if outcome.ok { "PASS" } else { "FAIL" }, outcome.detail);
        failed += usize::from(!outcome.ok);
    }
    println!("acceptance: {} of 10 criteria pass", 10 - failed);
    let strict = std::env::var("VSCSIM_ACCEPTANCE_STRICT").is_ok_and(|v| v == "1");
    if failed == 0 || !strict {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
