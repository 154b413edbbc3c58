//! Event and network data model.
//!
//! Every rating event is kept as its own edge (multigraph semantics): degrees
//! count events and reputations sum event weights. The rewarding layer holds
//! the positive scores, the punitive layer the negative ones, both weighted by
//! the absolute score.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::{Error, Result};

/// Seconds since the Unix epoch, UTC.
pub type Timestamp = i64;

/// Opaque user identifier as found in the input.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct UserId(pub u64);

impl fmt::Display for UserId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// A non-zero rating score in `[-10, 10]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Score(i8);

impl Score {
    pub const MAX_ABS: i64 = 10;

    pub fn new(value: i64) -> Result<Self> {
        if value == 0 || value.abs() > Self::MAX_ABS {
            return Err(Error::InvalidScore(value));
        }
        Ok(Score(value as i8))
    }

    pub fn value(self) -> i64 {
        i64::from(self.0)
    }

    /// Absolute value, i.e. the edge weight on the score's layer.
    pub fn weight(self) -> u8 {
        self.0.unsigned_abs()
    }

    pub fn layer(self) -> Layer {
        if self.0 > 0 {
            Layer::Rewarding
        } else {
            Layer::Punitive
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RatingEvent {
    pub rater: UserId,
    pub ratee: UserId,
    pub score: Score,
    pub timestamp: Timestamp,
}

impl RatingEvent {
    pub fn new(rater: UserId, ratee: UserId, score: i64, timestamp: Timestamp) -> Result<Self> {
        let score = Score::new(score)?;
        if rater == ratee {
            return Err(Error::SelfRating(rater));
        }
        Ok(RatingEvent {
            rater,
            ratee,
            score,
            timestamp,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Layer {
    Rewarding,
    Punitive,
}

impl Layer {
    pub const BOTH: [Layer; 2] = [Layer::Rewarding, Layer::Punitive];

    pub fn name(self) -> &'static str {
        match self {
            Layer::Rewarding => "rewarding",
            Layer::Punitive => "punitive",
        }
    }

    pub fn contains(self, score: Score) -> bool {
        score.layer() == self
    }
}

impl fmt::Display for Layer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Inclusive upper time bound for projections and metrics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Cutoff {
    #[default]
    End,
    At(Timestamp),
}

impl Cutoff {
    pub fn admits(self, t: Timestamp) -> bool {
        match self {
            Cutoff::End => true,
            Cutoff::At(c) => t <= c,
        }
    }
}

/// Time-ordered, immutable rating log.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EventLog {
    events: Vec<RatingEvent>,
    users: Vec<UserId>,
}

impl EventLog {
    /// Builds a log, ordering events by timestamp and keeping input order
    /// among equal timestamps.
    pub fn from_events(mut events: Vec<RatingEvent>) -> Self {
        events.sort_by_key(|e| e.timestamp);
        let mut users: Vec<UserId> = events.iter().flat_map(|e| [e.rater, e.ratee]).collect();
        users.sort_unstable();
        users.dedup();
        EventLog { events, users }
    }

    pub fn events(&self) -> &[RatingEvent] {
        &self.events
    }

    /// Sorted distinct users appearing as rater or ratee.
    pub fn users(&self) -> &[UserId] {
        &self.users
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn contains_user(&self, user: UserId) -> bool {
        self.users.binary_search(&user).is_ok()
    }

    pub(crate) fn index_of(&self, user: UserId) -> Option<usize> {
        self.users.binary_search(&user).ok()
    }

    pub fn first_timestamp(&self) -> Option<Timestamp> {
        self.events.first().map(|e| e.timestamp)
    }

    pub fn last_timestamp(&self) -> Option<Timestamp> {
        self.events.last().map(|e| e.timestamp)
    }

    /// Prefix of events admitted by `cutoff`.
    pub fn events_until(&self, cutoff: Cutoff) -> &[RatingEvent] {
        match cutoff {
            Cutoff::End => &self.events,
            Cutoff::At(c) => {
                let end = self.events.partition_point(|e| e.timestamp <= c);
                &self.events[..end]
            }
        }
    }

    /// A new log holding only the events admitted by `cutoff`.
    pub fn truncated(&self, cutoff: Cutoff) -> EventLog {
        EventLog::from_events(self.events_until(cutoff).to_vec())
    }

    pub fn filter<F>(&self, mut keep: F) -> EventLog
    where
        F: FnMut(&RatingEvent) -> bool,
    {
        EventLog::from_events(self.events.iter().filter(|e| keep(e)).copied().collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LayerEdge {
    pub rater: UserId,
    pub ratee: UserId,
    pub weight: u8,
    pub timestamp: Timestamp,
}

/// One layer of the log up to a cutoff, as a directed weighted multigraph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayerView {
    pub layer: Layer,
    pub cutoff: Cutoff,
    edges: Vec<LayerEdge>,
}

impl LayerView {
    pub fn project(log: &EventLog, layer: Layer, cutoff: Cutoff) -> Self {
        let edges = log
            .events_until(cutoff)
            .iter()
            .filter(|e| layer.contains(e.score))
            .map(|e| LayerEdge {
                rater: e.rater,
                ratee: e.ratee,
                weight: e.score.weight(),
                timestamp: e.timestamp,
            })
            .collect();
        LayerView { layer, cutoff, edges }
    }

    pub fn edges(&self) -> &[LayerEdge] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Sub-layer keeping only edges whose weight satisfies `keep`.
    pub fn with_weights<F>(&self, keep: F) -> LayerView
    where
        F: Fn(u8) -> bool,
    {
        LayerView {
            layer: self.layer,
            cutoff: self.cutoff,
            edges: self.edges.iter().filter(|e| keep(e.weight)).copied().collect(),
        }
    }

    /// Distinct users incident to at least one edge, sorted.
    pub fn nodes(&self) -> Vec<UserId> {
        let mut nodes: Vec<UserId> = self.edges.iter().flat_map(|e| [e.rater, e.ratee]).collect();
        nodes.sort_unstable();
        nodes.dedup();
        nodes
    }
}

/// Rewarding and punitive projections of `log` at `cutoff`.
pub fn split_layers(log: &EventLog, cutoff: Cutoff) -> (LayerView, LayerView) {
    (
        LayerView::project(log, Layer::Rewarding, cutoff),
        LayerView::project(log, Layer::Punitive, cutoff),
    )
}

/// Per-user degrees and reputations.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct NodeMetrics {
    pub k_in_plus: u64,
    pub k_in_minus: u64,
    pub k_out_plus: u64,
    pub k_out_minus: u64,
    pub rho_plus: u64,
    pub rho_minus: u64,
    pub rho: i64,
}

impl NodeMetrics {
    pub fn record_incoming(&mut self, score: Score) {
        let w = u64::from(score.weight());
        match score.layer() {
            Layer::Rewarding => {
                self.k_in_plus += 1;
                self.rho_plus += w;
            }
            Layer::Punitive => {
                self.k_in_minus += 1;
                self.rho_minus += w;
            }
        }
        self.rho = self.rho_plus as i64 - self.rho_minus as i64;
    }

    pub fn record_outgoing(&mut self, score: Score) {
        match score.layer() {
            Layer::Rewarding => self.k_out_plus += 1,
            Layer::Punitive => self.k_out_minus += 1,
        }
    }

    pub fn k_in(&self, layer: Layer) -> u64 {
        match layer {
            Layer::Rewarding => self.k_in_plus,
            Layer::Punitive => self.k_in_minus,
        }
    }

    pub fn k_out(&self, layer: Layer) -> u64 {
        match layer {
            Layer::Rewarding => self.k_out_plus,
            Layer::Punitive => self.k_out_minus,
        }
    }

    pub fn reputation(&self, layer: Layer) -> u64 {
        match layer {
            Layer::Rewarding => self.rho_plus,
            Layer::Punitive => self.rho_minus,
        }
    }

    /// Total incoming events over both layers.
    pub fn k_in_total(&self) -> u64 {
        self.k_in_plus + self.k_in_minus
    }

    pub fn k_out_total(&self) -> u64 {
        self.k_out_plus + self.k_out_minus
    }
}

pub type MetricsMap = BTreeMap<UserId, NodeMetrics>;

/// Metrics for every user seen (as rater or ratee) at or before `cutoff`.
pub fn node_metrics(log: &EventLog, cutoff: Cutoff) -> MetricsMap {
    let mut dense = vec![None::<NodeMetrics>; log.users().len()];
    for e in log.events_until(cutoff) {
        // Indices always resolve: every rater and ratee is in the user set.
        let src = log.index_of(e.rater).expect("rater indexed");
        let dst = log.index_of(e.ratee).expect("ratee indexed");
        dense[src].get_or_insert_with(Default::default).record_outgoing(e.score);
        dense[dst].get_or_insert_with(Default::default).record_incoming(e.score);
    }
    log.users()
        .iter()
        .zip(dense)
        .filter_map(|(&u, m)| m.map(|m| (u, m)))
        .collect()
}

/// Capped one-hop trust of `viewer` in `target`.
///
/// Uses the latest rating per ordered pair at `cutoff`. Each intermediary `j`
/// the viewer rates positively contributes `sign(r(j,t)) * min(r(v,j), |r(j,t)|)`;
/// the viewer's own latest rating of the target, if any, is added on top.
pub fn gettrust(log: &EventLog, viewer: UserId, target: UserId, cutoff: Cutoff) -> Result<i64> {
    if viewer == target {
        return Err(Error::SameViewerTarget(viewer));
    }
    for u in [viewer, target] {
        if !log.contains_user(u) {
            return Err(Error::UnknownUser(u));
        }
    }

    let mut from_viewer: HashMap<UserId, i64> = HashMap::new();
    let mut to_target: HashMap<UserId, i64> = HashMap::new();
    for e in log.events_until(cutoff) {
        if e.rater == viewer {
            from_viewer.insert(e.ratee, e.score.value());
        }
        if e.ratee == target {
            to_target.insert(e.rater, e.score.value());
        }
    }

    let direct = from_viewer.get(&target).copied().unwrap_or(0);
    let propagated: i64 = from_viewer
        .iter()
        .filter(|&(&j, &r_vj)| r_vj > 0 && j != target)
        .filter_map(|(j, &r_vj)| to_target.get(j).map(|&r_jt| r_jt.signum() * r_vj.min(r_jt.abs())))
        .sum();
    Ok(direct + propagated)
}
