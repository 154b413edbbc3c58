//! Subcommand pipelines.

use std::collections::BTreeMap;
use std::fs;
use std::io::BufReader;

use anyhow::{anyhow, Context as _};
use sha2::{Digest, Sha256};

use wot_core::category::{categorize, category_summary, reputation_vs_indegree_scatter, CategoryLabel};
use wot_core::dynamics::{gini_series, topk_stability_series, trajectories, Trajectory, TrajectorySelection};
use wot_core::export::{self, Table};
use wot_core::graph::{avg_neighbor_degree_spectrum, clustering_spectrum};
use wot_core::ingest::{ingest_bytes, write_log, IngestReport};
use wot_core::nullmodel::{configuration_null, ATTEMPTS_PER_EDGE, SWAPS_PER_EDGE};
use wot_core::ranking::ranking_report;
use wot_core::statics::{reputation_by_indegree, reputation_distributions, sublayer_clustering, weight_distribution};
use wot_core::synth::{synth_log, SynthConfig};
use wot_core::temporal::{
    activity_calendar, circadian_profile, daily_series, interevent_by_user, interevent_distribution, parse_annotations,
    weekly_profile, yearly_burstiness, AnnotationWindow, TzShift,
};
use wot_core::{node_metrics, Cutoff, EventLog, Layer, LayerView, MetricsMap};

use crate::args::Command;
use crate::config::RunConfig;
use crate::output::{InputInfo, Manifest, OutputDir};
use crate::Failure;

type StageResult = anyhow::Result<()>;

/// State shared by the stages of one run.
struct Run<'a> {
    cfg: &'a RunConfig,
    command: Command,
    out: Option<OutputDir>,
    input: Option<InputInfo>,
    metadata: BTreeMap<&'static str, String>,
    warnings: Vec<String>,
    failures: Vec<String>,
}

impl<'a> Run<'a> {
    fn new(cfg: &'a RunConfig, command: Command) -> Self {
        Run {
            cfg,
            command,
            out: None,
            input: None,
            metadata: BTreeMap::new(),
            warnings: Vec::new(),
            failures: Vec::new(),
        }
    }

    fn open_out(&mut self, required: bool) -> Result<(), Failure> {
        let path = match (&self.cfg.out, required) {
            (Some(p), _) => p.clone(),
            (None, false) => return Ok(()),
            (None, true) => return Err(Failure::Usage(format!("--out is required for {}", self.command.name()))),
        };
        self.out = Some(OutputDir::create(&path).map_err(Failure::Input)?);
        Ok(())
    }

    fn write(&mut self, name: &str, table: &Table) -> StageResult {
        match self.out.as_mut() {
            Some(out) => out.write_table(name, table),
            None => Ok(()),
        }
    }

    fn warn(&mut self, msg: String) {
        log::warn!("{msg}");
        self.warnings.push(msg);
    }

    fn stage(&mut self, name: &str, f: impl FnOnce(&mut Self) -> StageResult) {
        log::info!("running {name}");
        if let Err(e) = f(self) {
            log::error!("{name} failed: {e:#}");
            self.failures.push(format!("{name}: {e:#}"));
        }
    }

    fn load(&mut self) -> Result<(EventLog, IngestReport), Failure> {
        let path = self
            .cfg
            .input
            .clone()
            .ok_or_else(|| Failure::Usage(format!("--input is required for {}", self.command.name())))?;
        let bytes = fs::read(&path)
            .with_context(|| format!("reading {}", path.display()))
            .map_err(Failure::Input)?;
        self.input = Some(InputInfo {
            path: path.display().to_string(),
            sha256: hex::encode(Sha256::digest(&bytes)),
            bytes: bytes.len() as u64,
        });
        let (log, report) = ingest_bytes(&bytes, self.cfg.mode)
            .with_context(|| format!("ingesting {}", path.display()))
            .map_err(Failure::Input)?;
        if !report.rejected.is_empty() {
            self.warn(format!("{} malformed records skipped", report.rejected.len()));
        }
        Ok((log, report))
    }

    /// Writes the manifest (if there is an output directory) and turns
    /// recorded stage failures into an analysis failure.
    fn finish(mut self) -> Result<(), Failure> {
        if let Some(mut out) = self.out.take() {
            let manifest = Manifest {
                tool: "wot",
                version: env!("CARGO_PKG_VERSION"),
                command: self.command.name().to_string(),
                created_at: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
                config: self.cfg.describe(),
                input: self.input.take(),
                metadata: std::mem::take(&mut self.metadata),
                files: out.files().to_vec(),
                warnings: std::mem::take(&mut self.warnings),
                failures: self.failures.clone(),
            };
            manifest.write(&mut out).map_err(Failure::Analysis)?;
        }
        if self.failures.is_empty() {
            Ok(())
        } else {
            Err(Failure::Analysis(anyhow!("{}", self.failures.join("; "))))
        }
    }
}

pub fn run(command: Command, cfg: &RunConfig) -> Result<(), Failure> {
    match command {
        Command::IngestCheck => ingest_check(cfg),
        Command::Summary => summary(cfg),
        Command::Synth => synth(cfg),
        _ => analyses(command, cfg),
    }
}

fn ingest_check(cfg: &RunConfig) -> Result<(), Failure> {
    let mut run = Run::new(cfg, Command::IngestCheck);
    let (log, report) = run.load()?;
    run.open_out(false)?;
    println!(
        "kept={} rejected={} users={} header_skipped={}",
        report.kept,
        report.rejected.len(),
        log.users().len(),
        report.header_skipped
    );
    for r in report.rejected.iter().take(10) {
        eprintln!("line {}: {} ({:?})", r.line, r.reason, r.content);
    }
    let mut t = Table::new(&["line", "reason", "content"]);
    for r in &report.rejected {
        t.push(vec![r.line.to_string(), r.reason.clone(), r.content.clone()]);
    }
    run.stage("ingest-check", |run| run.write("rejections.csv", &t));
    run.finish()
}

fn summary(cfg: &RunConfig) -> Result<(), Failure> {
    let mut run = Run::new(cfg, Command::Summary);
    let (log, _) = run.load()?;
    run.open_out(false)?;
    let (plus, minus) = wot_core::split_layers(&log, Cutoff::End);
    println!(
        "users={} events={} e_plus={} e_minus={}",
        log.users().len(),
        log.len(),
        plus.len(),
        minus.len()
    );
    let mut t = Table::new(&["users", "events", "e_plus", "e_minus"]);
    t.push(vec![
        log.users().len().to_string(),
        log.len().to_string(),
        plus.len().to_string(),
        minus.len().to_string(),
    ]);
    run.stage("summary", |run| {
        run.write("summary.csv", &t)?;
        run.write(
            "node_metrics.csv",
            &export::node_metrics_table(&node_metrics(&log, Cutoff::End)),
        )
    });
    run.finish()
}

fn synth(cfg: &RunConfig) -> Result<(), Failure> {
    let seed = cfg.require_seed("synth")?;
    let mut run = Run::new(cfg, Command::Synth);
    run.open_out(true)?;
    let mut sc = SynthConfig::new(cfg.users, cfg.events, seed);
    sc.positive_fraction = cfg.positive_fraction;
    let log = synth_log(&sc).map_err(|e| Failure::Usage(e.to_string()))?;
    run.metadata
        .insert("time_model", "uniform 2011-01-01..2016-12-31 UTC".into());
    run.metadata.insert("score_magnitudes", "uniform 1..10".into());
    run.stage("synth", |run| {
        let mut buf = Vec::new();
        write_log(&log, &mut buf)?;
        run.out
            .as_mut()
            .expect("output directory is open")
            .write_bytes("synthetic.csv", &buf)
    });
    run.finish()
}

fn analyses(command: Command, cfg: &RunConfig) -> Result<(), Failure> {
    if matches!(command, Command::Static | Command::All) {
        cfg.require_seed(command.name())?;
    }
    let mut run = Run::new(cfg, command);
    let windows = match &cfg.annotations {
        Some(path) => {
            let f = fs::File::open(path)
                .with_context(|| format!("opening annotations {}", path.display()))
                .map_err(Failure::Input)?;
            parse_annotations(BufReader::new(f))
                .with_context(|| format!("parsing annotations {}", path.display()))
                .map_err(Failure::Input)?
        }
        None => Vec::new(),
    };
    let (log, _) = run.load()?;
    if log.is_empty() {
        return Err(Failure::Input(anyhow!("input holds no valid records")));
    }
    run.open_out(true)?;
    let metrics = node_metrics(&log, Cutoff::End);
    run.metadata.insert("day_boundary", "UTC midnight".into());
    run.metadata
        .insert("tie_break", "descending value, then ascending user id".into());
    run.stage("node metrics", |run| {
        run.write("node_metrics.csv", &export::node_metrics_table(&metrics))
    });

    let all = command == Command::All;
    if all || command == Command::Static {
        run.stage("static", |run| static_stage(run, &log, &metrics));
    }
    if all || command == Command::Categories {
        run.stage("categories", |run| categories_stage(run, &metrics));
    }
    if all || command == Command::Temporal {
        run.stage("temporal", |run| temporal_stage(run, &log, &windows));
    }
    if all || command == Command::Dynamics {
        run.stage("dynamics", |run| dynamics_stage(run, &log, &metrics));
    }
    if all || command == Command::Trajectories {
        run.stage("trajectories", |run| trajectories_stage(run, &log));
    }
    run.finish()
}

fn layer_suffix(layer: Layer) -> &'static str {
    match layer {
        Layer::Rewarding => "plus",
        Layer::Punitive => "minus",
    }
}

fn static_stage(run: &mut Run, log: &EventLog, metrics: &MetricsMap) -> StageResult {
    let cfg = run.cfg;
    let seed = cfg.require_seed("static").map_err(|e| anyhow!("{e}"))?;
    run.metadata.insert("swaps_per_edge", SWAPS_PER_EDGE.to_string());
    run.metadata.insert("attempts_per_edge", ATTEMPTS_PER_EDGE.to_string());
    run.metadata
        .insert("projection", "undirected, unweighted, parallel edges collapsed".into());
    let layers: Vec<(Layer, LayerView)> = Layer::BOTH
        .iter()
        .map(|&l| (l, LayerView::project(log, l, Cutoff::End)))
        .collect();

    let weights: Vec<(&str, _)> = layers
        .iter()
        .filter(|(_, v)| !v.is_empty())
        .map(|(l, v)| Ok((layer_suffix(*l), weight_distribution(v)?)))
        .collect::<anyhow::Result<_>>()?;
    let refs: Vec<(&str, &_)> = weights.iter().map(|(n, d)| (*n, d)).collect();
    run.write("weights.csv", &export::distribution_table("weight", &refs))?;

    let reps = reputation_distributions(metrics)?;
    let mut series = Vec::new();
    if let Some(d) = &reps.positive {
        series.push(("rho_plus", d));
    }
    if let Some(d) = &reps.negative {
        series.push(("rho_minus", d));
    }
    series.push(("rho", &reps.global));
    run.write(
        "reputation_distribution.csv",
        &export::distribution_table("value", &series),
    )?;
    let binned: Vec<(&str, Vec<(f64, f64)>)> = series
        .iter()
        .filter(|(n, _)| *n != "rho")
        .map(|(n, d)| (*n, d.log_binned_ccdf(10f64.powf(0.1))))
        .collect();
    run.write(
        "reputation_ccdf_logbinned.csv",
        &export::log_ccdf_table("value", &binned),
    )?;

    for (layer, view) in &layers {
        let sfx = layer_suffix(*layer);
        if view.is_empty() {
            run.warn(format!("{} layer is empty; skipping its spectra", layer.name()));
            continue;
        }
        let null = configuration_null(view, cfg.null_samples, seed, cfg.low_degree)?;
        for w in null.warnings() {
            run.warn(format!("{} null model: {w}", layer.name()));
        }
        if null.samples.iter().any(|s| !s.degrees_preserved) {
            return Err(anyhow!("null model changed a degree sequence"));
        }
        run.write(
            &format!("clustering_null_{sfx}.csv"),
            &export::null_clustering_table(&null),
        )?;
        run.write(&format!("null_samples_{sfx}.csv"), &export::null_samples_table(&null))?;
        run.metadata.insert(
            if *layer == Layer::Rewarding {
                "mean_clustering_plus"
            } else {
                "mean_clustering_minus"
            },
            format!(
                "empirical={} null_mean={} null_std={}",
                null.empirical_mean, null.null_mean, null.null_std
            ),
        );

        let clustering = clustering_spectrum(view, cfg.low_degree);
        run.write(
            &format!("clustering_logbins_{sfx}.csv"),
            &export::log_bins_table("mean_clustering", &clustering.log_bins()),
        )?;
        let annd = avg_neighbor_degree_spectrum(view);
        run.write(
            &format!("annd_{sfx}.csv"),
            &export::spectrum_table("mean_neighbor_degree", &annd),
        )?;
        run.write(
            &format!("annd_logbins_{sfx}.csv"),
            &export::log_bins_table("mean_neighbor_degree", &annd.log_bins()),
        )?;
        run.write(
            &format!("reputation_by_indegree_{sfx}.csv"),
            &export::spectrum_table("rho", &reputation_by_indegree(metrics, *layer)?),
        )?;
        if *layer == Layer::Rewarding {
            run.write(
                "sublayer_clustering_plus.csv",
                &export::sublayer_clustering_table(&sublayer_clustering(view)),
            )?;
        }
    }

    let report = ranking_report(metrics)?;
    run.write("tau_matrix.csv", &export::tau_matrix_table(&report))?;
    run.write("ranking_by_k_in_plus.csv", &export::ranking_table(&report))?;
    Ok(())
}

fn categories_stage(run: &mut Run, metrics: &MetricsMap) -> StageResult {
    let t = run.cfg.thresholds;
    let labels = categorize(metrics, &t);
    let summary = category_summary(metrics, &labels);
    let scatter = reputation_vs_indegree_scatter(metrics, &labels);
    run.metadata.insert(
        "category_rule",
        format!(
            "r = rho_minus/(rho_plus+rho_minus); trustworthy r<{}, untrusted r>{}",
            t.low(),
            t.high()
        ),
    );
    run.write("categories.csv", &export::categories_table(metrics, &labels))?;
    run.write("category_quantiles.csv", &export::category_quantiles_table(&summary))?;
    run.write("category_values.csv", &export::category_values_table(&summary))?;
    run.write("reputation_vs_indegree.csv", &export::scatter_table(&scatter))?;
    run.write("reference_lines.csv", &export::reference_lines_table(&scatter))?;
    Ok(())
}

fn temporal_stage(run: &mut Run, log: &EventLog, windows: &[AnnotationWindow]) -> StageResult {
    let shift = run.cfg.tz_shift;
    run.metadata.insert("tz_shift_hours", shift.get().to_string());
    run.metadata.insert("interevent_units", "seconds".into());
    for (tag, s) in [("utc", TzShift::UTC), ("shifted", shift)] {
        run.write(
            &format!("daily_{tag}.csv"),
            &export::daily_table(&daily_series(log, s), windows),
        )?;
        run.write(
            &format!("calendar_{tag}.csv"),
            &export::calendar_table(&activity_calendar(log, s)),
        )?;
        run.write(
            &format!("circadian_{tag}.csv"),
            &export::profile_table("hour", &circadian_profile(log, s)),
        )?;
        run.write(
            &format!("weekly_{tag}.csv"),
            &export::profile_table("weekday", &weekly_profile(log, s)),
        )?;
    }

    let dists: Vec<(&str, _)> = Layer::BOTH
        .iter()
        .filter_map(|&l| interevent_distribution(log, l).map(|d| (layer_suffix(l), d)))
        .collect();
    let refs: Vec<(&str, &_)> = dists.iter().map(|(n, d)| (*n, d)).collect();
    run.write(
        "interevent_distribution.csv",
        &export::distribution_table("delta_seconds", &refs),
    )?;
    let binned: Vec<(&str, Vec<(f64, f64)>)> = dists
        .iter()
        .map(|(n, d)| (*n, d.log_binned_ccdf(10f64.powf(0.1))))
        .collect();
    run.write(
        "interevent_ccdf_logbinned.csv",
        &export::log_ccdf_table("delta_seconds", &binned),
    )?;
    if run.cfg.per_user_interevents {
        let per: Vec<_> = Layer::BOTH.iter().map(|&l| (l, interevent_by_user(log, l))).collect();
        run.write("interevent_by_user.csv", &export::interevent_by_user_table(&per))?;
    }
    run.write("burstiness.csv", &export::burstiness_table(&yearly_burstiness(log)))?;
    Ok(())
}

fn dynamics_stage(run: &mut Run, log: &EventLog, metrics: &MetricsMap) -> StageResult {
    let cfg = run.cfg;
    run.metadata.insert("topk", cfg.topk.to_string());
    run.write("gini.csv", &export::gini_table(&gini_series(log, cfg.gini_population)))?;
    let stability = topk_stability_series(log, cfg.topk)?;
    if stability.iter().any(|r| r.truncated) {
        run.warn(format!(
            "some days have fewer than {} users; their lists are truncated",
            cfg.topk
        ));
    }
    run.write("topk_stability.csv", &export::stability_table(&stability))?;
    run.write("topk_set_stability.csv", &export::set_stability_table(&stability))?;

    // the last snapshot must agree with the aggregate metrics
    let mut engine = wot_core::dynamics::SnapshotEngine::new(log);
    while engine.advance().is_some() {}
    if &engine.to_metrics_map() != metrics {
        return Err(anyhow!("final snapshot disagrees with aggregate node metrics"));
    }
    Ok(())
}

fn slope_table(sets: &[(&str, &[Trajectory])]) -> Table {
    let mut t = Table::new(&["selection", "user", "n_events", "final_rho", "mean_slope", "category"]);
    for (name, trs) in sets {
        for tr in *trs {
            t.push(vec![
                name.to_string(),
                tr.user.to_string(),
                tr.values.len().to_string(),
                tr.values.last().map(|v| v.to_string()).unwrap_or_default(),
                tr.mean_slope().map(|s| s.to_string()).unwrap_or_default(),
                tr.category.name().to_string(),
            ]);
        }
    }
    t
}

fn trajectories_stage(run: &mut Run, log: &EventLog) -> StageResult {
    let cfg = run.cfg;
    let top_plus = trajectories(log, TrajectorySelection::TopKPositive(cfg.topk), &cfg.thresholds);
    let top_minus = trajectories(log, TrajectorySelection::TopKNegative(cfg.topk), &cfg.thresholds);
    let mut by_category = Vec::new();
    for label in CategoryLabel::CATEGORIZED {
        by_category.extend(trajectories(
            log,
            TrajectorySelection::ByCategory(label),
            &cfg.thresholds,
        ));
    }
    run.metadata
        .insert("trajectory_entrants", "daily top-k, strictly positive value".into());
    run.write("trajectories_top_plus.csv", &export::trajectories_table(&top_plus))?;
    run.write("trajectories_top_minus.csv", &export::trajectories_table(&top_minus))?;
    run.write(
        "trajectories_by_category.csv",
        &export::trajectories_table(&by_category),
    )?;
    run.write(
        "trajectory_slopes.csv",
        &slope_table(&[
            ("top_plus", &top_plus),
            ("top_minus", &top_minus),
            ("by_category", &by_category),
        ]),
    )?;
    Ok(())
}
