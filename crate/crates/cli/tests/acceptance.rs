//! Acceptance suite: one PASS/FAIL/SKIP line per criterion.
//!
//! Dataset criteria (1-9) read the Bitcoin-OTC rating dump from `$WOT_DATASET`
//! or `data/soc-sign-bitcoinotc.csv[.gz]` under the workspace root and are
//! skipped when neither exists. Criterion 10 needs no data.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use wot_core::category::{categorize, category_summary, CategoryLabel, CategoryThresholds};
use wot_core::dynamics::{extended_jaccard, gini, gini_series, snapshot_series, GiniPopulation};
use wot_core::graph::{avg_neighbor_degree_spectrum, LowDegree, SimpleGraph};
use wot_core::ingest::{ingest_path, write_log, IngestMode};
use wot_core::nullmodel::{configuration_null, rewire, sample_rng, DirectedSimpleGraph};
use wot_core::ranking::{ranking_report, tau_b, RankingKey};
use wot_core::statics::{sublayer_clustering, weight_distribution, SublayerConvention};
use wot_core::synth::{synth_log, SynthConfig};
use wot_core::temporal::{
    burstiness, circadian_profile, interevent_samples, weekly_profile, yearly_burstiness, TzShift,
};
use wot_core::{node_metrics, Cutoff, EventLog, Layer, LayerView, MetricsMap};

use common::*;

const SEED: u64 = 20_170_101;

enum Outcome {
    Pass(String),
    Fail(String),
    Skip(String),
}

type Check = Result<String, String>;

fn outcome(c: Check) -> Outcome {
    match c {
        Ok(m) => Outcome::Pass(m),
        Err(m) => Outcome::Fail(m),
    }
}

fn ensure(cond: bool, msg: String) -> Check {
    if cond {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn workspace_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn dataset_path() -> Option<PathBuf> {
    if let Ok(p) = std::env::var("WOT_DATASET") {
        let p = PathBuf::from(p);
        return p.exists().then_some(p);
    }
    let data = workspace_root().join("data");
    ["soc-sign-bitcoinotc.csv", "soc-sign-bitcoinotc.csv.gz"]
        .iter()
        .map(|n| data.join(n))
        .find(|p| p.exists())
}

struct Dataset {
    log: EventLog,
    metrics: MetricsMap,
    plus: LayerView,
    minus: LayerView,
}

// ---- dataset criteria ----

fn c1_counts(d: &Dataset) -> Check {
    let (users, events, ep, em) = (d.log.users().len(), d.log.len(), d.plus.len(), d.minus.len());
    let expected = (5_878usize, 35_795usize, 32_305usize, 3_490usize);
    let msg = format!(
        "users={users} events={events} e_plus={ep} e_minus={em} (delta {:+} {:+} {:+} {:+})",
        users as i64 - expected.0 as i64,
        events as i64 - expected.1 as i64,
        ep as i64 - expected.2 as i64,
        em as i64 - expected.3 as i64
    );
    ensure((users, events, ep, em) == expected, msg)
}

fn c2_modes(d: &Dataset) -> Check {
    let mp = weight_distribution(&d.plus).map_err(|e| e.to_string())?.mode();
    let mm = weight_distribution(&d.minus).map_err(|e| e.to_string())?.mode();
    ensure(
        mp == 1 && mm == 10,
        format!("L+ mode={mp} (want 1), L- mode={mm} (want 10)"),
    )
}

fn c3_gini(d: &Dataset) -> Check {
    let rows = gini_series(&d.log, GiniPopulation::Positive);
    let last = rows.last().ok_or("no gini rows")?.day;
    let from = last - chrono::Days::new(364);
    let tail: Vec<_> = rows.iter().filter(|r| r.day >= from).collect();
    let plus: Vec<f64> = tail.iter().filter_map(|r| r.plus).collect();
    let minus: Vec<f64> = tail.iter().filter_map(|r| r.minus).collect();
    if plus.is_empty() || minus.is_empty() {
        return Err("final year has no gini values".into());
    }
    let gp = plus.iter().sum::<f64>() / plus.len() as f64;
    let gm = minus.iter().sum::<f64>() / minus.len() as f64;
    ensure(
        (gp - 0.75).abs() <= 0.05 && (gm - 0.60).abs() <= 0.05 && gp > gm,
        format!("final-year mean G+={gp:.4} (0.75+-0.05), G-={gm:.4} (0.60+-0.05)"),
    )
}

fn c4_null(d: &Dataset) -> Check {
    let p = configuration_null(&d.plus, 20, SEED, LowDegree::AsZero).map_err(|e| e.to_string())?;
    let m = configuration_null(&d.minus, 20, SEED, LowDegree::AsZero).map_err(|e| e.to_string())?;
    let preserved = p.samples.iter().chain(&m.samples).all(|s| s.degrees_preserved);
    let up = p.empirical_mean - p.null_mean > p.null_std;
    let down = m.null_mean - m.empirical_mean > m.null_std;
    ensure(
        up && down && preserved,
        format!(
            "L+ emp={:.4} null={:.4}+-{:.4}; L- emp={:.4} null={:.4}+-{:.4}; degrees preserved={preserved}",
            p.empirical_mean, p.null_mean, p.null_std, m.empirical_mean, m.null_mean, m.null_std
        ),
    )
}

fn c5_sublayers(d: &Dataset) -> Check {
    let rows = sublayer_clustering(&d.plus);
    let get = |s: &str, c| {
        rows.iter()
            .find(|r| r.sublayer == s && r.convention == c)
            .map(|r| r.mean_clustering)
            .unwrap_or(f64::NAN)
    };
    let within = |v: f64, target: f64| (v - target).abs() <= 0.2 * target;
    let mut parts = Vec::new();
    let mut any_match = false;
    for c in SublayerConvention::ALL {
        let (heavy, unit) = (get("w>1", c), get("w=1", c));
        let ok = within(heavy, 0.063) && within(unit, 0.022);
        any_match |= ok;
        parts.push(format!(
            "{}: w>1={heavy:.4} w=1={unit:.4}{}",
            c.name(),
            if ok { " *" } else { "" }
        ));
    }
    let ordered = get("w>1", SublayerConvention::AsZero) > get("w=1", SublayerConvention::AsZero);
    ensure(ordered && any_match, parts.join("; "))
}

fn c6_disassortative(d: &Dataset) -> Check {
    let tp = avg_neighbor_degree_spectrum(&d.plus)
        .log_binned_trend()
        .ok_or("L+ trend undefined")?;
    let tm = avg_neighbor_degree_spectrum(&d.minus)
        .log_binned_trend()
        .ok_or("L- trend undefined")?;
    ensure(tp < 0.0 && tm < 0.0, format!("Spearman L+={tp:.4} L-={tm:.4}"))
}

fn c7_tau(d: &Dataset) -> Check {
    let r = ranking_report(&d.metrics).map_err(|e| e.to_string())?;
    let t = |k| r.tau(RankingKey::Rho, k);
    let (kip, kop, kim, kom) = (
        t(RankingKey::KInPlus),
        t(RankingKey::KOutPlus),
        t(RankingKey::KInMinus),
        t(RankingKey::KOutMinus),
    );
    ensure(
        kip.min(kop) > kim.max(kom),
        format!("tau(rho,k_in+)={kip:.4} tau(rho,k_out+)={kop:.4} tau(rho,k_in-)={kim:.4} tau(rho,k_out-)={kom:.4}"),
    )
}

fn c8_categories(d: &Dataset) -> Check {
    let labels = categorize(&d.metrics, &CategoryThresholds::default());
    let s = category_summary(&d.metrics, &labels);
    let by = |l: CategoryLabel| s.iter().find(|c| c.label == l).expect("all labels summarized");
    let (t, c, u) = (
        by(CategoryLabel::Trustworthy),
        by(CategoryLabel::Controversial),
        by(CategoryLabel::Untrusted),
    );
    let largest = t.n_users > c.n_users && t.n_users > u.n_users;
    let rho_order = u.rho.median < c.rho.median && c.rho.median < t.rho.median;
    let low_activity = u.activity.median < c.activity.median && u.activity.median < t.activity.median;
    ensure(
        largest && rho_order && low_activity,
        format!(
            "n T/C/U={}/{}/{}; median rho {}/{}/{}; median activity {}/{}/{}",
            t.n_users,
            c.n_users,
            u.n_users,
            t.rho.median,
            c.rho.median,
            u.rho.median,
            t.activity.median,
            c.activity.median,
            u.activity.median
        ),
    )
}

fn c9_temporal(d: &Dataset) -> Check {
    let yb = yearly_burstiness(&d.log);
    let mut bursty = true;
    let mut parts = Vec::new();
    for year in 2012..=2015 {
        for layer in Layer::BOTH {
            match yb.iter().find(|r| r.year == year && r.layer == layer) {
                Some(r) => {
                    bursty &= r.b > 0.0;
                    parts.push(format!(
                        "{year}{}={:.3}",
                        if layer == Layer::Rewarding { "+" } else { "-" },
                        r.b
                    ));
                }
                None => {
                    bursty = false;
                    parts.push(format!("{year} {} missing", layer.name()));
                }
            }
        }
    }
    let shift = TzShift::hours(-6).expect("valid shift");
    let weekly = weekly_profile(&d.log, shift);
    let weekend = weekly.minus[5] + weekly.minus[6];
    let circ = circadian_profile(&d.log, shift);
    let midday: f64 = circ.minus[11..=14].iter().sum();
    ensure(
        bursty && weekend < 2.0 / 7.0 && midday > 4.0 / 24.0,
        format!(
            "B {}; L- weekend share={weekend:.4} (<{:.4}); L- 11-14h share={midday:.4} (>{:.4})",
            parts.join(" "),
            2.0 / 7.0,
            4.0 / 24.0
        ),
    )
}

// ---- criterion 10: dataset-independent properties ----

fn p_metric_axioms() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..500 {
        let n = rng.gen_range(2..40);
        let xs: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..100.0)).collect();
        let g = gini(&xs).map_err(|e| e.to_string())?;
        if !(0.0..1.0).contains(&g) {
            return Err(format!("gini {g} outside [0,1)"));
        }
        let scaled: Vec<f64> = xs.iter().map(|x| x * 7.5).collect();
        if (gini(&scaled).unwrap() - g).abs() > 1e-9 {
            return Err("gini not scale invariant".into());
        }
        let ys: Vec<f64> = (0..n).map(|_| rng.gen_range(0..5) as f64).collect();
        let x_int: Vec<f64> = xs.iter().map(|x| x.floor()).collect();
        if let Ok(t) = tau_b(&x_int, &ys) {
            let fx: Vec<f64> = x_int.iter().map(|v| v.exp() + v).collect();
            if !(-1.0..=1.0).contains(&t) || (tau_b(&fx, &ys).unwrap() - t).abs() > 1e-12 {
                return Err("tau bound or monotone invariance violated".into());
            }
        }
    }
    if gini(&[1.0; 4]).unwrap() != 0.0 || (gini(&[0.0, 0.0, 0.0, 1.0]).unwrap() - 0.75).abs() > 1e-12 {
        return Err("gini reference values".into());
    }
    for seed in 0..100 {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let edges: Vec<(usize, usize)> = (0..30).map(|_| (r.gen_range(0..10), r.gen_range(0..10))).collect();
        let g = SimpleGraph::from_index_edges((0..10).map(wot_core::UserId).collect(), edges);
        if g.local_clustering().iter().any(|c| !(0.0..=1.0).contains(c)) {
            return Err("clustering outside [0,1]".into());
        }
    }
    let constant = burstiness(&[5.0; 50]).map_err(|e| e.to_string())?;
    if constant != -1.0 {
        return Err(format!("B(constant) = {constant}"));
    }
    use rand_distr::{Distribution, Exp};
    let exp = Exp::new(1.0 / 3600.0).unwrap();
    let xs: Vec<f64> = (0..100_000).map(|_| exp.sample(&mut rng)).collect();
    let b = burstiness(&xs).unwrap();
    if b.abs() > 0.02 {
        return Err(format!("B(exponential) = {b}"));
    }
    let a = [1u64, 2, 3];
    let checks = [
        (extended_jaccard(&a, &a, 3).unwrap(), 1.0),
        (extended_jaccard(&a, &[4, 5, 6], 3).unwrap(), 0.0),
        (extended_jaccard::<u64>(&[], &[], 3).unwrap(), 1.0),
        (extended_jaccard(&[1u64, 2, 3], &[2, 1, 3], 3).unwrap(), 2.0 / 3.0),
    ];
    if checks.iter().any(|(got, want)| (got - want).abs() > 1e-12) || extended_jaccard(&a, &a, 0).is_ok() {
        return Err("extended Jaccard boundary cases".into());
    }
    Ok(format!(
        "gini, tau, clustering, B(const)=-1, B(exp)={b:.4}, Jaccard boundaries"
    ))
}

fn random_log(seed: u64, n_events: usize, n_users: u64, t_max: i64) -> EventLog {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let raw: Vec<_> = (0..n_events)
        .map(|_| {
            let a = rng.gen_range(0..n_users);
            let b = (a + rng.gen_range(1..n_users)) % n_users;
            let s = if rng.gen_bool(0.8) {
                rng.gen_range(1..=10)
            } else {
                -rng.gen_range(1..=10)
            };
            (a, b, s, rng.gen_range(0..t_max) + 1_400_000_000)
        })
        .collect();
    log_from(&raw)
}

fn p_oracles() -> Check {
    let mut instances = 0;
    for seed in 0..200 {
        let log = random_log(seed, 50, 8, 20 * 86_400);
        for layer in Layer::BOTH {
            let view = LayerView::project(&log, layer, Cutoff::End);
            if view.is_empty() {
                continue;
            }
            instances += 1;
            let g = SimpleGraph::from_layer(&view);
            let edges: Vec<(u64, u64)> = view.edges().iter().map(|e| (e.rater.0, e.ratee.0)).collect();
            let adj = adjacency(&edges);
            let (c, k) = (brute_clustering(&adj), brute_neighbor_degree(&adj));
            let (lc, lk) = (g.local_clustering(), g.average_neighbor_degree());
            for (i, u) in g.nodes().iter().enumerate() {
                if (lc[i] - c[&u.0]).abs() > 1e-12 || (lk[i] - k[&u.0]).abs() > 1e-12 {
                    return Err(format!("clustering/ANND mismatch, seed {seed}"));
                }
            }
            // interevents: pairwise differences of each user's sorted incoming times
            let mut fast = interevent_samples(&log, layer);
            let mut slow = Vec::new();
            for u in log.users() {
                let mut ts: Vec<i64> = view
                    .edges()
                    .iter()
                    .filter(|e| e.ratee == *u)
                    .map(|e| e.timestamp)
                    .collect();
                ts.sort_unstable();
                slow.extend(ts.windows(2).map(|w| w[1] - w[0]));
            }
            fast.sort_unstable();
            slow.sort_unstable();
            if fast != slow {
                return Err(format!("interevent mismatch, seed {seed}"));
            }
        }
        let m = node_metrics(&log, Cutoff::End);
        let x: Vec<f64> = m.values().map(|v| v.rho as f64).collect();
        let y: Vec<f64> = m.values().map(|v| v.k_in_plus as f64).collect();
        match (tau_b(&x, &y), brute_tau_b(&x, &y)) {
            (Ok(a), Some(b)) if (a - b).abs() < 1e-12 => {}
            (Err(_), None) => {}
            _ => return Err(format!("tau mismatch, seed {seed}")),
        }
    }
    Ok(format!(
        "clustering/ANND/tau/interevents on {instances} layer instances (<=8 nodes, 50 events)"
    ))
}

fn p_snapshots() -> Check {
    for seed in 0..50 {
        let log = random_log(1000 + seed, 50, 8, 15 * 86_400);
        let snaps = snapshot_series(&log);
        for s in &snaps {
            let end = s.day.and_hms_opt(23, 59, 59).unwrap().and_utc().timestamp();
            if s.metrics != node_metrics(&log, Cutoff::At(end)) {
                return Err(format!("snapshot {} differs from truncation, seed {seed}", s.day));
            }
        }
        if snaps.last().map(|s| &s.metrics) != Some(&node_metrics(&log, Cutoff::End)) {
            return Err("final snapshot differs from full-log metrics".into());
        }
    }
    Ok("50 random 50-event logs, every daily snapshot equals the truncated log".into())
}

fn p_degree_preservation() -> Check {
    let mut swaps = 0;
    for seed in 0..100 {
        let log = random_log(2000 + seed, 200, 30, 1000);
        for layer in Layer::BOTH {
            let g = DirectedSimpleGraph::from_layer(&LayerView::project(&log, layer, Cutoff::End));
            let out = rewire(&g, &mut sample_rng(seed, 0));
            swaps += out.swaps;
            if out.graph.in_degrees() != g.in_degrees() || out.graph.out_degrees() != g.out_degrees() {
                return Err(format!("degree sequence changed, seed {seed}"));
            }
            if out.graph.edges.iter().any(|(a, b)| a == b) {
                return Err("self-loop introduced".into());
            }
        }
    }
    Ok(format!("200 rewired layers, {swaps} swaps, in/out sequences identical"))
}

fn p_determinism() -> Check {
    let cfg = SynthConfig::new(80, 3000, 77);
    let (a, b) = (synth_log(&cfg).unwrap(), synth_log(&cfg).unwrap());
    if a != b || synth_log(&SynthConfig::new(80, 3000, 78)).unwrap() == a {
        return Err("synth not seed-determined".into());
    }
    let view = LayerView::project(&a, Layer::Rewarding, Cutoff::End);
    let n1 = configuration_null(&view, 5, 9, LowDegree::AsZero).unwrap();
    let n2 = configuration_null(&view, 5, 9, LowDegree::AsZero).unwrap();
    // NaN cells (degrees absent from the empirical graph) defeat `==`
    if format!("{n1:?}") != format!("{n2:?}") {
        return Err("null model not seed-determined".into());
    }
    // whole CLI pipeline, twice
    let tmp = std::env::temp_dir().join(format!("wot-accept-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&tmp);
    std::fs::create_dir_all(&tmp).unwrap();
    let input = tmp.join("log.csv");
    write_log(&a, std::fs::File::create(&input).unwrap()).unwrap();
    let mut outputs = Vec::new();
    for run in ["r1", "r2"] {
        let out = tmp.join(run);
        let status = Command::new(env!("CARGO_BIN_EXE_wot"))
            .args(["all", "--seed", "3", "--null-samples", "3", "--input"])
            .arg(&input)
            .arg("--out")
            .arg(&out)
            .status()
            .unwrap();
        if !status.success() {
            return Err(format!("cli run failed: {status}"));
        }
        outputs.push(out);
    }
    let mut compared = 0;
    for entry in std::fs::read_dir(&outputs[0]).unwrap() {
        let name = entry.unwrap().file_name();
        if name == "manifest.json" {
            continue;
        }
        if std::fs::read(outputs[0].join(&name)).unwrap() != std::fs::read(outputs[1].join(&name)).unwrap() {
            return Err(format!("{} differs between seeded runs", name.to_string_lossy()));
        }
        compared += 1;
    }
    let _ = std::fs::remove_dir_all(&tmp);
    Ok(format!(
        "synth, null model, and {compared} CLI output files reproduce under a fixed seed"
    ))
}

fn perf(dataset: Option<&Path>) -> Check {
    let tmp = std::env::temp_dir().join(format!("wot-perf-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&tmp);
    std::fs::create_dir_all(&tmp).unwrap();
    let input = match dataset {
        Some(p) => p.to_path_buf(),
        None => {
            let p = tmp.join("synthetic.csv");
            let log = synth_log(&SynthConfig::new(5_878, 35_795, 5)).unwrap();
            write_log(&log, std::fs::File::create(&p).unwrap()).unwrap();
            p
        }
    };
    let start = Instant::now();
    let status = Command::new(env!("CARGO_BIN_EXE_wot"))
        .args(["all", "--seed", "1", "--null-samples", "20", "--input"])
        .arg(&input)
        .arg("--out")
        .arg(tmp.join("out"))
        .status()
        .unwrap();
    let secs = start.elapsed().as_secs_f64();
    let _ = std::fs::remove_dir_all(&tmp);
    let what = if dataset.is_some() {
        "dataset"
    } else {
        "dataset-sized synthetic log"
    };
    ensure(
        status.success() && secs < 120.0,
        format!("`all` on {what} with 20 null samples: {secs:.1}s (< 120s)"),
    )
}

#[test]
#[allow(clippy::type_complexity)]
fn acceptance() {
    let mut lines: Vec<(String, Outcome)> = Vec::new();
    let dataset = dataset_path();

    let criteria: [(&str, fn(&Dataset) -> Check); 9] = [
        ("C1 dataset counts", c1_counts),
        ("C2 score modes", c2_modes),
        ("C3 gini plateau", c3_gini),
        ("C4 clustering null ordering", c4_null),
        ("C5 norm-breaking clustering", c5_sublayers),
        ("C6 disassortativity", c6_disassortative),
        ("C7 rank correlations", c7_tau),
        ("C8 categories", c8_categories),
        ("C9 temporal patterns", c9_temporal),
    ];
    match &dataset {
        Some(path) => match ingest_path(path, IngestMode::Lenient) {
            Ok((log, _)) => {
                let (plus, minus) = wot_core::split_layers(&log, Cutoff::End);
                let d = Dataset {
                    metrics: node_metrics(&log, Cutoff::End),
                    log,
                    plus,
                    minus,
                };
                for (name, f) in criteria {
                    let start = Instant::now();
                    let mut result = f(&d);
                    let secs = start.elapsed().as_secs_f64();
                    result = match result {
                        Ok(m) if secs >= 10.0 => Err(format!("{m} [took {secs:.1}s, limit 10s]")),
                        Ok(m) => Ok(format!("{m} [{secs:.2}s]")),
                        Err(m) => Err(format!("{m} [{secs:.2}s]")),
                    };
                    lines.push((name.into(), outcome(result)));
                }
            }
            Err(e) => {
                for (name, _) in criteria {
                    lines.push((
                        name.into(),
                        Outcome::Fail(format!("cannot ingest {}: {e}", path.display())),
                    ));
                }
            }
        },
        None => {
            for (name, _) in criteria {
                lines.push((
                    name.into(),
                    Outcome::Skip("dataset not found (set WOT_DATASET or add data/soc-sign-bitcoinotc.csv)".into()),
                ));
            }
        }
    }

    let props: [(&str, fn() -> Check); 5] = [
        ("metric axioms", p_metric_axioms),
        ("brute-force oracles", p_oracles),
        ("snapshot vs truncation", p_snapshots),
        ("configuration-model degree preservation", p_degree_preservation),
        ("seeded determinism", p_determinism),
    ];
    let mut sub = Vec::new();
    for (name, f) in props {
        sub.push((name, f()));
    }
    let c10 = if sub.iter().all(|(_, r)| r.is_ok()) {
        Outcome::Pass(format!("{} suites", sub.len()))
    } else {
        Outcome::Fail(
            sub.iter()
                .filter_map(|(n, r)| r.as_ref().err().map(|e| format!("{n}: {e}")))
                .collect::<Vec<_>>()
                .join("; "),
        )
    };
    lines.push(("C10 property suites".into(), c10));
    for (name, r) in sub {
        lines.push((format!("  C10 {name}"), outcome(r)));
    }
    lines.push(("runtime budget".into(), outcome(perf(dataset.as_deref()))));

    let mut failed = 0;
    println!();
    for (name, o) in &lines {
        let (tag, msg) = match o {
            Outcome::Pass(m) => ("PASS", m),
            Outcome::Fail(m) => {
                failed += 1;
                ("FAIL", m)
            }
            Outcome::Skip(m) => ("SKIP", m),
        };
        println!("[{tag}] {name}: {msg}");
    }
    assert_eq!(failed, 0, "{failed} acceptance line(s) failed");
}
