//! Plot-ready CSV tables for every analysis. Missing values are empty cells.

use std::io::Write;

use crate::category::{negative_fraction, CategorySummary, Labels, Scatter, Summary};
use crate::dynamics::{GiniRow, StabilityRow, Trajectory};
use crate::error::Result;
use crate::graph::DegreeSpectrum;
use crate::model::{Layer, MetricsMap, UserId};
use crate::nullmodel::NullComparison;
use crate::ranking::{RankingKey, RankingReport};
use crate::statics::SublayerClustering;
use crate::stats::{Distribution, LogBin};
use crate::temporal::{
    annotation_for, ActivityCalendar, ActivityProfile, AnnotationWindow, DailyRow, YearlyBurstiness,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.header)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv is utf-8")
    }
}

fn num(x: f64) -> String {
    if x.is_finite() {
        x.to_string()
    } else {
        String::new()
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

pub fn node_metrics_table(metrics: &MetricsMap) -> Table {
    let mut t = Table::new(&[
        "user",
        "k_in_plus",
        "k_in_minus",
        "k_out_plus",
        "k_out_minus",
        "rho_plus",
        "rho_minus",
        "rho",
    ]);
    for (u, m) in metrics {
        t.push(vec![
            u.to_string(),
            m.k_in_plus.to_string(),
            m.k_in_minus.to_string(),
            m.k_out_plus.to_string(),
            m.k_out_minus.to_string(),
            m.rho_plus.to_string(),
            m.rho_minus.to_string(),
            m.rho.to_string(),
        ]);
    }
    t
}

/// `label,value,count,pmf,ccdf` rows for labeled distributions.
pub fn distribution_table(value_name: &str, dists: &[(&str, &Distribution)]) -> Table {
    let mut t = Table::new(&["series", value_name, "count", "pmf", "ccdf"]);
    for (label, d) in dists {
        for i in 0..d.support.len() {
            t.push(vec![
                label.to_string(),
                d.support[i].to_string(),
                d.counts[i].to_string(),
                num(d.pmf[i]),
                num(d.ccdf[i]),
            ]);
        }
    }
    t
}

pub fn log_ccdf_table(value_name: &str, series: &[(&str, Vec<(f64, f64)>)]) -> Table {
    let mut t = Table::new(&["series", value_name, "ccdf"]);
    for (label, points) in series {
        for &(x, p) in points {
            t.push(vec![label.to_string(), num(x), num(p)]);
        }
    }
    t
}

pub fn null_clustering_table(null: &NullComparison) -> Table {
    let mut t = Table::new(&["degree", "mean_clustering", "std", "null_mean", "null_std", "n_nodes"]);
    for r in &null.rows {
        t.push(vec![
            r.degree.to_string(),
            num(r.mean_clustering),
            num(r.std),
            num(r.null_mean),
            num(r.null_std),
            r.n_nodes.to_string(),
        ]);
    }
    t
}

pub fn null_samples_table(null: &NullComparison) -> Table {
    let mut t = Table::new(&[
        "sample",
        "swaps",
        "attempts",
        "target_swaps",
        "degrees_preserved",
        "mean_clustering",
    ]);
    for (i, s) in null.samples.iter().enumerate() {
        t.push(vec![
            i.to_string(),
            s.swaps.to_string(),
            s.attempts.to_string(),
            s.target_swaps.to_string(),
            s.degrees_preserved.to_string(),
            num(s.mean_clustering),
        ]);
    }
    t
}

pub fn sublayer_clustering_table(rows: &[SublayerClustering]) -> Table {
    let mut t = Table::new(&["sublayer", "convention", "mean_clustering", "n_nodes", "n_edges"]);
    for r in rows {
        t.push(vec![
            r.sublayer.to_string(),
            r.convention.name().to_string(),
            num(r.mean_clustering),
            r.n_nodes.to_string(),
            r.n_edges.to_string(),
        ]);
    }
    t
}

pub fn spectrum_table(value_name: &str, spectrum: &DegreeSpectrum) -> Table {
    let std_name = format!("std_{value_name}");
    let mut t = Table::new(&["degree", value_name, &std_name, "n_nodes"]);
    for r in &spectrum.rows {
        t.push(vec![
            r.degree.to_string(),
            num(r.mean_value),
            num(r.std_value),
            r.n_nodes.to_string(),
        ]);
    }
    t
}

pub fn log_bins_table(value_name: &str, bins: &[LogBin]) -> Table {
    let mut t = Table::new(&["degree_low", "degree_high", "degree_center", value_name, "n_nodes"]);
    for b in bins {
        t.push(vec![
            b.lower.to_string(),
            b.upper.to_string(),
            num(b.center),
            num(b.mean),
            b.n_nodes.to_string(),
        ]);
    }
    t
}

pub fn tau_matrix_table(report: &RankingReport) -> Table {
    let mut header = vec![""];
    header.extend(RankingKey::ALL.iter().map(|k| k.label()));
    let mut t = Table::new(&header);
    for (i, k) in RankingKey::ALL.iter().enumerate() {
        let mut row = vec![k.label().to_string()];
        row.extend(report.tau[i].iter().map(|&x| num(x)));
        t.push(row);
    }
    t
}

pub fn ranking_table(report: &RankingReport) -> Table {
    let mut t = Table::new(&[
        "rank",
        "user",
        "k_in_plus",
        "k_in_minus",
        "k_out_plus",
        "k_out_minus",
        "rho",
    ]);
    for r in &report.by_k_in_plus {
        let m = &r.metrics;
        t.push(vec![
            r.rank.to_string(),
            r.user.to_string(),
            m.k_in_plus.to_string(),
            m.k_in_minus.to_string(),
            m.k_out_plus.to_string(),
            m.k_out_minus.to_string(),
            m.rho.to_string(),
        ]);
    }
    t
}

pub fn categories_table(metrics: &MetricsMap, labels: &Labels) -> Table {
    let mut t = Table::new(&["user", "rho_plus", "rho_minus", "rho", "r", "label"]);
    for (u, m) in metrics {
        t.push(vec![
            u.to_string(),
            m.rho_plus.to_string(),
            m.rho_minus.to_string(),
            m.rho.to_string(),
            opt(negative_fraction(m)),
            labels.get(u).map(|l| l.name()).unwrap_or("uncategorized").to_string(),
        ]);
    }
    t
}

fn summary_fields(s: &Summary) -> Vec<String> {
    vec![
        s.n.to_string(),
        num(s.min),
        num(s.q1),
        num(s.median),
        num(s.q3),
        num(s.max),
    ]
}

fn summaries(c: &CategorySummary) -> [(&'static str, &Summary); 4] {
    [
        ("rho", &c.rho),
        ("k_out_plus", &c.k_out_plus),
        ("k_out_minus", &c.k_out_minus),
        ("k_out_total", &c.activity),
    ]
}

pub fn category_quantiles_table(summary: &[CategorySummary]) -> Table {
    let mut t = Table::new(&["label", "quantity", "n", "min", "q1", "median", "q3", "max"]);
    for c in summary {
        for (name, s) in summaries(c) {
            let mut row = vec![c.label.name().to_string(), name.to_string()];
            row.extend(summary_fields(s));
            t.push(row);
        }
    }
    t
}

pub fn category_values_table(summary: &[CategorySummary]) -> Table {
    let mut t = Table::new(&["label", "quantity", "value"]);
    for c in summary {
        for (name, s) in summaries(c) {
            for &v in &s.values {
                t.push(vec![c.label.name().to_string(), name.to_string(), num(v)]);
            }
        }
    }
    t
}

pub fn scatter_table(scatter: &Scatter) -> Table {
    let mut t = Table::new(&["user", "k_in", "rho", "label"]);
    for p in &scatter.points {
        t.push(vec![
            p.user.to_string(),
            p.k_in.to_string(),
            p.rho.to_string(),
            p.label.name().to_string(),
        ]);
    }
    t
}

pub fn reference_lines_table(scatter: &Scatter) -> Table {
    let mut t = Table::new(&["line", "slope"]);
    for l in &scatter.lines {
        t.push(vec![l.name.to_string(), l.slope.to_string()]);
    }
    t
}

/// `date,count_plus,count_minus`, with an `annotation` column when windows are given.
pub fn daily_table(rows: &[DailyRow], windows: &[AnnotationWindow]) -> Table {
    let mut t = if windows.is_empty() {
        Table::new(&["date", "count_plus", "count_minus"])
    } else {
        Table::new(&["date", "count_plus", "count_minus", "annotation"])
    };
    for r in rows {
        let mut row = vec![r.day.to_string(), r.count_plus.to_string(), r.count_minus.to_string()];
        if !windows.is_empty() {
            row.push(annotation_for(r.day, windows));
        }
        t.push(row);
    }
    t
}

pub fn calendar_table(cal: &ActivityCalendar) -> Table {
    let mut t = Table::new(&["layer", "date"]);
    for layer in Layer::BOTH {
        for d in cal.layer(layer) {
            t.push(vec![layer.name().to_string(), d.to_string()]);
        }
    }
    t
}

/// Per-user interevent times in seconds, `layer,user,delta_seconds`.
pub fn interevent_by_user_table(per_layer: &[(Layer, std::collections::BTreeMap<UserId, Vec<i64>>)]) -> Table {
    let mut t = Table::new(&["layer", "user", "delta_seconds"]);
    for (layer, by_user) in per_layer {
        for (u, deltas) in by_user {
            for d in deltas {
                t.push(vec![layer.name().to_string(), u.to_string(), d.to_string()]);
            }
        }
    }
    t
}

pub fn burstiness_table(rows: &[YearlyBurstiness]) -> Table {
    let mut t = Table::new(&["year", "layer", "B", "n_samples"]);
    for r in rows {
        t.push(vec![
            r.year.to_string(),
            r.layer.name().to_string(),
            num(r.b),
            r.n_samples.to_string(),
        ]);
    }
    t
}

pub fn profile_table(bucket_name: &str, profile: &ActivityProfile) -> Table {
    let mut t = Table::new(&[bucket_name, "frac_plus", "frac_minus"]);
    for i in 0..profile.plus.len() {
        t.push(vec![i.to_string(), num(profile.plus[i]), num(profile.minus[i])]);
    }
    t
}

pub fn gini_table(rows: &[GiniRow]) -> Table {
    let mut t = Table::new(&["date", "gini_plus", "gini_minus"]);
    for r in rows {
        t.push(vec![r.day.to_string(), opt(r.plus), opt(r.minus)]);
    }
    t
}

pub fn stability_table(rows: &[StabilityRow]) -> Table {
    let mut t = Table::new(&["date", "J_plus", "J_minus", "J_global"]);
    for r in rows {
        t.push(vec![r.day.to_string(), num(r.j_plus), num(r.j_minus), num(r.j_global)]);
    }
    t
}

pub fn set_stability_table(rows: &[StabilityRow]) -> Table {
    let mut t = Table::new(&["date", "set_J_plus", "set_J_minus", "set_J_global", "truncated"]);
    for r in rows {
        t.push(vec![
            r.day.to_string(),
            num(r.set_plus),
            num(r.set_minus),
            num(r.set_global),
            r.truncated.to_string(),
        ]);
    }
    t
}

pub fn trajectories_table(trajectories: &[Trajectory]) -> Table {
    let mut t = Table::new(&["user", "seq_index", "rho", "category"]);
    for tr in trajectories {
        for (i, v) in tr.values.iter().enumerate() {
            t.push(vec![
                tr.user.to_string(),
                i.to_string(),
                v.to_string(),
                tr.category.name().to_string(),
            ]);
        }
    }
    t
}
