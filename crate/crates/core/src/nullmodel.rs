//! Configuration-model null for clustering spectra.
//!
//! Each sample rewires the directed simple graph of a layer by endpoint swaps
//! `(a->b, c->d) => (a->d, c->b)`, rejecting swaps that would create a
//! self-loop or a duplicate directed edge. In- and out-degree sequences are
//! therefore preserved exactly. Samples use independent RNG streams derived
//! from the master seed, so results do not depend on the thread count.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{clustering_spectrum_of, DegreeSpectrum, LowDegree, SimpleGraph};
use crate::model::{LayerView, UserId};
use crate::stats;

/// Successful swaps targeted per edge.
pub const SWAPS_PER_EDGE: usize = 10;
/// Attempt budget per edge before giving up on the swap target.
pub const ATTEMPTS_PER_EDGE: usize = 100;

/// Directed simple graph over dense node indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectedSimpleGraph {
    pub nodes: Vec<UserId>,
    pub edges: Vec<(usize, usize)>,
}

impl DirectedSimpleGraph {
    pub fn from_layer(layer: &LayerView) -> Self {
        let nodes = layer.nodes();
        let idx = |u: UserId| nodes.binary_search(&u).expect("node of layer");
        let mut edges: Vec<(usize, usize)> = layer.edges().iter().map(|e| (idx(e.rater), idx(e.ratee))).collect();
        edges.sort_unstable();
        edges.dedup();
        DirectedSimpleGraph { nodes, edges }
    }

    pub fn out_degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.nodes.len()];
        for &(a, _) in &self.edges {
            d[a] += 1;
        }
        d
    }

    pub fn in_degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.nodes.len()];
        for &(_, b) in &self.edges {
            d[b] += 1;
        }
        d
    }

    pub fn undirected(&self) -> SimpleGraph {
        SimpleGraph::from_index_edges(self.nodes.clone(), self.edges.iter().copied())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RewireOutcome {
    pub graph: DirectedSimpleGraph,
    pub swaps: usize,
    pub attempts: usize,
    pub target_swaps: usize,
}

impl RewireOutcome {
    pub fn reached_target(&self) -> bool {
        self.swaps >= self.target_swaps
    }
}

/// Degree-preserving rewiring with `SWAPS_PER_EDGE * |E|` target swaps.
pub fn rewire<R: Rng>(graph: &DirectedSimpleGraph, rng: &mut R) -> RewireOutcome {
    let mut edges = graph.edges.clone();
    let m = edges.len();
    let target_swaps = SWAPS_PER_EDGE * m;
    let max_attempts = ATTEMPTS_PER_EDGE * m;
    let mut present: HashSet<(usize, usize)> = edges.iter().copied().collect();
    let mut swaps = 0;
    let mut attempts = 0;
    if m >= 2 {
        while swaps < target_swaps && attempts < max_attempts {
            attempts += 1;
            let i = rng.gen_range(0..m);
            let j = rng.gen_range(0..m);
            if i == j {
                continue;
            }
            let (a, b) = edges[i];
            let (c, d) = edges[j];
            if a == d || c == b || present.contains(&(a, d)) || present.contains(&(c, b)) {
                continue;
            }
            present.remove(&(a, b));
            present.remove(&(c, d));
            present.insert((a, d));
            present.insert((c, b));
            edges[i] = (a, d);
            edges[j] = (c, b);
            swaps += 1;
        }
    }
    RewireOutcome {
        graph: DirectedSimpleGraph {
            nodes: graph.nodes.clone(),
            edges,
        },
        swaps,
        attempts,
        target_swaps,
    }
}

/// RNG for sample `index` of a run seeded with `seed`.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

#[derive(Debug, Clone, PartialEq)]
pub struct NullRow {
    pub degree: u64,
    /// Empirical spectrum; `NaN` where no empirical node has this degree.
    pub mean_clustering: f64,
    pub std: f64,
    /// Mean over samples of the per-sample bucket mean.
    pub null_mean: f64,
    /// Standard deviation over samples of the per-sample bucket mean.
    pub null_std: f64,
    pub n_nodes: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampleSummary {
    pub swaps: usize,
    pub attempts: usize,
    pub target_swaps: usize,
    pub degrees_preserved: bool,
    pub mean_clustering: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NullComparison {
    pub rows: Vec<NullRow>,
    pub empirical_mean: f64,
    pub null_mean: f64,
    pub null_std: f64,
    pub samples: Vec<SampleSummary>,
    pub seed: u64,
}

impl NullComparison {
    /// Samples whose swap target was not reached.
    pub fn warnings(&self) -> Vec<String> {
        self.samples
            .iter()
            .enumerate()
            .filter(|(_, s)| s.swaps < s.target_swaps)
            .map(|(i, s)| {
                format!(
                    "sample {i}: only {} of {} swaps after {} attempts",
                    s.swaps, s.target_swaps, s.attempts
                )
            })
            .collect()
    }
}

pub fn configuration_null(
    layer: &LayerView,
    n_samples: usize,
    seed: u64,
    low_degree: LowDegree,
) -> Result<NullComparison> {
    if n_samples == 0 {
        return Err(Error::InvalidConfig("null model needs at least one sample".into()));
    }
    let base = DirectedSimpleGraph::from_layer(layer);
    let in_deg = base.in_degrees();
    let out_deg = base.out_degrees();
    let empirical_graph = base.undirected();
    let empirical = clustering_spectrum_of(&empirical_graph, low_degree);
    let empirical_mean = empirical_graph.mean_clustering(low_degree);

    let sampled: Vec<(SampleSummary, DegreeSpectrum)> = (0..n_samples as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_rng(seed, i);
            let out = rewire(&base, &mut rng);
            let degrees_preserved = out.graph.in_degrees() == in_deg && out.graph.out_degrees() == out_deg;
            let g = out.graph.undirected();
            let summary = SampleSummary {
                swaps: out.swaps,
                attempts: out.attempts,
                target_swaps: out.target_swaps,
                degrees_preserved,
                mean_clustering: g.mean_clustering(low_degree),
            };
            (summary, clustering_spectrum_of(&g, low_degree))
        })
        .collect();

    for (i, (s, _)) in sampled.iter().enumerate() {
        if s.swaps < s.target_swaps {
            log::warn!(
                "null sample {i}: reached {} of {} swaps; degree sequence constrains mixing",
                s.swaps,
                s.target_swaps
            );
        }
    }

    let mut degrees: Vec<u64> = empirical.rows.iter().map(|r| r.degree).collect();
    for (_, spec) in &sampled {
        degrees.extend(spec.rows.iter().map(|r| r.degree));
    }
    degrees.sort_unstable();
    degrees.dedup();

    let rows = degrees
        .into_iter()
        .map(|degree| {
            let emp = empirical.get(degree);
            let null_values: Vec<f64> = sampled
                .iter()
                .filter_map(|(_, s)| s.get(degree).map(|r| r.mean_value))
                .collect();
            let (null_mean, null_std) = if null_values.is_empty() {
                (f64::NAN, f64::NAN)
            } else {
                (stats::mean(&null_values), stats::std_dev(&null_values))
            };
            NullRow {
                degree,
                mean_clustering: emp.map_or(f64::NAN, |r| r.mean_value),
                std: emp.map_or(f64::NAN, |r| r.std_value),
                null_mean,
                null_std,
                n_nodes: emp.map_or(0, |r| r.n_nodes),
            }
        })
        .collect();

    let sample_means: Vec<f64> = sampled.iter().map(|(s, _)| s.mean_clustering).collect();
    Ok(NullComparison {
        rows,
        empirical_mean,
        null_mean: stats::mean(&sample_means),
        null_std: stats::std_dev(&sample_means),
        samples: sampled.into_iter().map(|(s, _)| s).collect(),
        seed,
    })
}
