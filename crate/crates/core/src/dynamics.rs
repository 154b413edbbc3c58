//! Daily cumulative reputation snapshots and the measures built on them:
//! Gini series, top-k stability, and flattened trajectories.
//!
//! Day boundaries are UTC. The engine folds events day by day and keeps
//! value histograms alongside the per-user state, so each day's Gini costs
//! `O(distinct values)` and each top-k extraction `O(users)`.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::hash::Hash;

use chrono::NaiveDate;

use crate::category::{label_of, CategoryLabel, CategoryThresholds};
use crate::error::{Error, Result};
use crate::model::{EventLog, Layer, MetricsMap, NodeMetrics, UserId};
use crate::ranking::descending_then_id;
use crate::temporal::TzShift;

/// Gini index of non-negative values:
/// `sum_i (2i - n - 1) x_i / (n sum x)` over ascending `x`, `i` from 1.
pub fn gini(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::EmptyData("gini"));
    }
    if values.iter().any(|&v| v < 0.0 || !v.is_finite()) {
        return Err(Error::InvalidConfig(
            "gini values must be finite and non-negative".into(),
        ));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let total: f64 = sorted.iter().sum();
    if total == 0.0 {
        return Err(Error::Degenerate("gini undefined for an all-zero vector"));
    }
    let weighted: f64 = sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| (2.0 * (i as f64 + 1.0) - n - 1.0) * x)
        .sum();
    Ok(weighted / (n * total))
}

/// Gini from a value histogram `(value, count)` in ascending value order,
/// with `zeros` extra users holding zero.
pub fn gini_from_histogram<I>(hist: I, zeros: u64) -> Option<f64>
where
    I: IntoIterator<Item = (u64, u64)>,
{
    let runs: Vec<(u64, u64)> = hist.into_iter().filter(|&(_, c)| c > 0).collect();
    let n = zeros + runs.iter().map(|r| r.1).sum::<u64>();
    let total: i128 = runs.iter().map(|&(v, c)| v as i128 * c as i128).sum();
    if n == 0 || total == 0 {
        return None;
    }
    let n_i = n as i128;
    let mut before = zeros as i128;
    let mut weighted: i128 = 0;
    for (v, c) in runs {
        let c = c as i128;
        weighted += v as i128 * (2 * c * before + c * (c + 1) - c * (n_i + 1));
        before += c;
    }
    Some(weighted as f64 / (n as f64 * total as f64))
}

/// Which users enter a layer's Gini.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GiniPopulation {
    /// Users with strictly positive reputation on the layer.
    #[default]
    Positive,
    /// Every user seen so far, zeros included.
    AllSeen,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ReputationKind {
    Positive,
    Negative,
    Global,
}

impl ReputationKind {
    pub const ALL: [ReputationKind; 3] = [
        ReputationKind::Positive,
        ReputationKind::Negative,
        ReputationKind::Global,
    ];

    pub fn value(self, m: &NodeMetrics) -> f64 {
        match self {
            ReputationKind::Positive => m.rho_plus as f64,
            ReputationKind::Negative => m.rho_minus as f64,
            ReputationKind::Global => m.rho as f64,
        }
    }
}

/// Incremental daily fold over a log.
pub struct SnapshotEngine<'a> {
    log: &'a EventLog,
    state: Vec<NodeMetrics>,
    seen: Vec<bool>,
    seen_list: Vec<usize>,
    hist_plus: BTreeMap<u64, u64>,
    hist_minus: BTreeMap<u64, u64>,
    cursor: usize,
    day: Option<NaiveDate>,
    last_day: Option<NaiveDate>,
}

fn bump(hist: &mut BTreeMap<u64, u64>, old: u64, new: u64) {
    if old > 0 {
        let c = hist.get_mut(&old).expect("old value tracked");
        *c -= 1;
        if *c == 0 {
            hist.remove(&old);
        }
    }
    *hist.entry(new).or_insert(0) += 1;
}

impl<'a> SnapshotEngine<'a> {
    pub fn new(log: &'a EventLog) -> Self {
        let n = log.users().len();
        SnapshotEngine {
            log,
            state: vec![NodeMetrics::default(); n],
            seen: vec![false; n],
            seen_list: Vec::new(),
            hist_plus: BTreeMap::new(),
            hist_minus: BTreeMap::new(),
            cursor: 0,
            day: None,
            last_day: log.last_timestamp().map(|t| TzShift::UTC.day(t)),
        }
    }

    fn mark_seen(&mut self, i: usize) {
        if !self.seen[i] {
            self.seen[i] = true;
            self.seen_list.push(i);
        }
    }

    /// Folds the next calendar day. Returns `None` after the last event day.
    pub fn advance(&mut self) -> Option<NaiveDate> {
        let next = match self.day {
            None => TzShift::UTC.day(self.log.first_timestamp()?),
            Some(d) => d.succ_opt()?,
        };
        if Some(next) > self.last_day {
            return None;
        }
        let events = self.log.events();
        while self.cursor < events.len() && TzShift::UTC.day(events[self.cursor].timestamp) <= next {
            let e = events[self.cursor];
            let src = self.log.index_of(e.rater).expect("rater indexed");
            let dst = self.log.index_of(e.ratee).expect("ratee indexed");
            self.mark_seen(src);
            self.mark_seen(dst);
            self.state[src].record_outgoing(e.score);
            let before = self.state[dst];
            self.state[dst].record_incoming(e.score);
            let after = self.state[dst];
            match e.score.layer() {
                Layer::Rewarding => bump(&mut self.hist_plus, before.rho_plus, after.rho_plus),
                Layer::Punitive => bump(&mut self.hist_minus, before.rho_minus, after.rho_minus),
            }
            self.cursor += 1;
        }
        self.day = Some(next);
        Some(next)
    }

    pub fn day(&self) -> Option<NaiveDate> {
        self.day
    }

    pub fn seen_count(&self) -> usize {
        self.seen_list.len()
    }

    pub fn metrics(&self, user: UserId) -> Option<NodeMetrics> {
        let i = self.log.index_of(user)?;
        self.seen[i].then_some(self.state[i])
    }

    pub fn to_metrics_map(&self) -> MetricsMap {
        self.seen_list
            .iter()
            .map(|&i| (self.log.users()[i], self.state[i]))
            .collect()
    }

    /// Number of users with strictly positive reputation on `layer`.
    pub fn qualifying(&self, layer: Layer) -> u64 {
        self.hist(layer).values().sum()
    }

    fn hist(&self, layer: Layer) -> &BTreeMap<u64, u64> {
        match layer {
            Layer::Rewarding => &self.hist_plus,
            Layer::Punitive => &self.hist_minus,
        }
    }

    pub fn gini(&self, layer: Layer, population: GiniPopulation) -> Option<f64> {
        let hist = self.hist(layer);
        let positives = self.qualifying(layer);
        let zeros = match population {
            GiniPopulation::Positive => 0,
            GiniPopulation::AllSeen => self.seen_list.len() as u64 - positives,
        };
        if positives + zeros < 2 {
            return None;
        }
        gini_from_histogram(hist.iter().map(|(&v, &c)| (v, c)), zeros)
    }

    /// Top `k` seen users by `kind`, descending value then ascending id.
    pub fn top_k(&self, kind: ReputationKind, k: usize) -> Vec<(UserId, f64)> {
        let users = self.log.users();
        let mut all: Vec<(UserId, f64)> = self
            .seen_list
            .iter()
            .map(|&i| (users[i], kind.value(&self.state[i])))
            .collect();
        let k = k.min(all.len());
        if k == 0 {
            return Vec::new();
        }
        if k < all.len() {
            all.select_nth_unstable_by(k - 1, descending_then_id);
            all.truncate(k);
        }
        all.sort_by(descending_then_id);
        all
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub day: NaiveDate,
    pub metrics: MetricsMap,
}

/// Owned daily snapshots from the first to the last event day.
///
/// Materialises a full metrics map per day; analyses over large logs should
/// drive a [`SnapshotEngine`] directly.
pub fn snapshot_series(log: &EventLog) -> Vec<Snapshot> {
    let mut engine = SnapshotEngine::new(log);
    let mut out = Vec::new();
    while let Some(day) = engine.advance() {
        out.push(Snapshot {
            day,
            metrics: engine.to_metrics_map(),
        });
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GiniRow {
    pub day: NaiveDate,
    pub plus: Option<f64>,
    pub minus: Option<f64>,
}

/// Daily Gini of positive and negative reputation. Days where neither layer
/// has two qualifying users are omitted.
pub fn gini_series(log: &EventLog, population: GiniPopulation) -> Vec<GiniRow> {
    let mut engine = SnapshotEngine::new(log);
    let mut out = Vec::new();
    while let Some(day) = engine.advance() {
        let plus = engine.gini(Layer::Rewarding, population);
        let minus = engine.gini(Layer::Punitive, population);
        if plus.is_some() || minus.is_some() {
            out.push(GiniRow { day, plus, minus });
        }
    }
    out
}

fn check_list<T: Eq + Hash>(list: &[T], k: usize) -> Result<()> {
    if list.len() > k {
        return Err(Error::InvalidConfig(format!(
            "list of length {} exceeds k = {k}",
            list.len()
        )));
    }
    let distinct: HashSet<&T> = list.iter().collect();
    if distinct.len() != list.len() {
        return Err(Error::InvalidConfig("ranked list contains duplicates".into()));
    }
    Ok(())
}

/// Prefix-averaged Jaccard similarity of two top-`k` lists:
/// `(1/k) sum_{d=1..k} |A_d & B_d| / |A_d | B_d|` over depth-`d` prefixes.
/// A depth where both prefixes are empty scores 1.
pub fn extended_jaccard<T: Eq + Hash + Copy>(a: &[T], b: &[T], k: usize) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidConfig("k must be at least 1".into()));
    }
    check_list(a, k)?;
    check_list(b, k)?;
    let mut in_a: HashSet<T> = HashSet::new();
    let mut in_b: HashSet<T> = HashSet::new();
    let mut common = 0usize;
    let mut sum = 0.0;
    for d in 0..k {
        if let Some(&x) = a.get(d) {
            if in_b.contains(&x) {
                common += 1;
            }
            in_a.insert(x);
        }
        if let Some(&y) = b.get(d) {
            if in_a.contains(&y) {
                common += 1;
            }
            in_b.insert(y);
        }
        let union = in_a.len() + in_b.len() - common;
        sum += if union == 0 { 1.0 } else { common as f64 / union as f64 };
    }
    Ok(sum / k as f64)
}

/// Plain Jaccard of the two lists as sets; two empty lists score 1.
pub fn set_jaccard<T: Eq + Hash + Copy>(a: &[T], b: &[T]) -> f64 {
    let sa: HashSet<T> = a.iter().copied().collect();
    let sb: HashSet<T> = b.iter().copied().collect();
    let union = sa.union(&sb).count();
    if union == 0 {
        1.0
    } else {
        sa.intersection(&sb).count() as f64 / union as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityRow {
    /// The later day of the compared pair.
    pub day: NaiveDate,
    pub j_plus: f64,
    pub j_minus: f64,
    pub j_global: f64,
    pub set_plus: f64,
    pub set_minus: f64,
    pub set_global: f64,
    /// Fewer than `k` users were available on either day.
    pub truncated: bool,
}

/// Extended Jaccard between the top-`k` lists of consecutive days, for
/// positive, negative and global reputation.
pub fn topk_stability_series(log: &EventLog, k: usize) -> Result<Vec<StabilityRow>> {
    if k == 0 {
        return Err(Error::InvalidConfig("k must be at least 1".into()));
    }
    let mut engine = SnapshotEngine::new(log);
    let mut prev: Option<([Vec<UserId>; 3], bool)> = None;
    let mut out = Vec::new();
    while let Some(day) = engine.advance() {
        let lists = ReputationKind::ALL.map(|kind| engine.top_k(kind, k).into_iter().map(|e| e.0).collect::<Vec<_>>());
        let short = engine.seen_count() < k;
        if let Some((before, short_before)) = &prev {
            let j = |i: usize| extended_jaccard(&before[i], &lists[i], k);
            out.push(StabilityRow {
                day,
                j_plus: j(0)?,
                j_minus: j(1)?,
                j_global: j(2)?,
                set_plus: set_jaccard(&before[0], &lists[0]),
                set_minus: set_jaccard(&before[1], &lists[1]),
                set_global: set_jaccard(&before[2], &lists[2]),
                truncated: short || *short_before,
            });
        }
        prev = Some((lists, short));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trajectory {
    pub user: UserId,
    /// Global reputation after each incoming event.
    pub values: Vec<i64>,
    /// Category at the end of the log.
    pub category: CategoryLabel,
}

impl Trajectory {
    /// Average change per incoming event.
    pub fn mean_slope(&self) -> Option<f64> {
        self.values.last().map(|&v| v as f64 / self.values.len() as f64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrajectorySelection {
    /// Users in the daily top-k of positive reputation on at least one day.
    TopKPositive(usize),
    /// Users in the daily top-k of negative reputation on at least one day.
    TopKNegative(usize),
    ByCategory(CategoryLabel),
}

/// Users that held a top-`k` position with a strictly positive value on at
/// least one day.
pub fn topk_entrants(log: &EventLog, kind: ReputationKind, k: usize) -> BTreeSet<UserId> {
    let mut engine = SnapshotEngine::new(log);
    let mut out = BTreeSet::new();
    while engine.advance().is_some() {
        out.extend(engine.top_k(kind, k).into_iter().filter(|e| e.1 > 0.0).map(|e| e.0));
    }
    out
}

/// Flattened trajectories of every user with at least one incoming event.
pub fn all_trajectories(log: &EventLog, thresholds: &CategoryThresholds) -> Vec<Trajectory> {
    let mut running: BTreeMap<UserId, (NodeMetrics, Vec<i64>)> = BTreeMap::new();
    for e in log.events() {
        let (m, values) = running.entry(e.ratee).or_default();
        m.record_incoming(e.score);
        values.push(m.rho);
    }
    running
        .into_iter()
        .map(|(user, (m, values))| Trajectory {
            user,
            values,
            category: label_of(&m, thresholds),
        })
        .collect()
}

pub fn trajectories(
    log: &EventLog,
    selection: TrajectorySelection,
    thresholds: &CategoryThresholds,
) -> Vec<Trajectory> {
    let all = all_trajectories(log, thresholds);
    match selection {
        TrajectorySelection::ByCategory(label) => all.into_iter().filter(|t| t.category == label).collect(),
        TrajectorySelection::TopKPositive(k) | TrajectorySelection::TopKNegative(k) => {
            let kind = if matches!(selection, TrajectorySelection::TopKPositive(_)) {
                ReputationKind::Positive
            } else {
                ReputationKind::Negative
            };
            let entrants = topk_entrants(log, kind, k);
            all.into_iter().filter(|t| entrants.contains(&t.user)).collect()
        }
    }
}
