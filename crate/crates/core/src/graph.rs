//! Simple undirected projections and their local structure.
//!
//! Clustering and neighbor-degree spectra work on the unweighted undirected
//! version of a layer: parallel edges and both directions collapse into one
//! simple edge.

use crate::model::{LayerView, UserId};
use crate::stats;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleGraph {
    nodes: Vec<UserId>,
    adj: Vec<Vec<usize>>,
}

impl SimpleGraph {
    /// Builds the projection from directed `(src, dst)` pairs over dense
    /// node indices `0..n`. Self-loops are ignored.
    pub fn from_index_edges<I>(nodes: Vec<UserId>, edges: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut adj = vec![Vec::new(); nodes.len()];
        for (a, b) in edges {
            if a != b {
                adj[a].push(b);
                adj[b].push(a);
            }
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        SimpleGraph { nodes, adj }
    }

    pub fn from_layer(layer: &LayerView) -> Self {
        let nodes = layer.nodes();
        let idx = |u: UserId| nodes.binary_search(&u).expect("node of layer");
        let edges: Vec<(usize, usize)> = layer.edges().iter().map(|e| (idx(e.rater), idx(e.ratee))).collect();
        Self::from_index_edges(nodes, edges)
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn nodes(&self) -> &[UserId] {
        &self.nodes
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adj[i].len()
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adj[i]
    }

    /// Triangles through each node.
    #[allow(clippy::needless_range_loop)]
    pub fn triangles(&self) -> Vec<u64> {
        let n = self.nodes.len();
        let mut mark = vec![usize::MAX; n];
        let mut tri = vec![0u64; n];
        for u in 0..n {
            for &v in &self.adj[u] {
                mark[v] = u;
            }
            let mut count = 0u64;
            for &v in &self.adj[u] {
                for &w in &self.adj[v] {
                    if w > v && mark[w] == u {
                        count += 1;
                    }
                }
            }
            tri[u] = count;
        }
        tri
    }

    /// Local clustering per node; nodes with degree below 2 get 0.
    pub fn local_clustering(&self) -> Vec<f64> {
        self.triangles()
            .into_iter()
            .enumerate()
            .map(|(i, t)| {
                let d = self.degree(i) as f64;
                if d < 2.0 {
                    0.0
                } else {
                    t as f64 / (d * (d - 1.0) / 2.0)
                }
            })
            .collect()
    }

    /// Mean degree of each node's neighbors; `NaN` for isolated nodes.
    pub fn average_neighbor_degree(&self) -> Vec<f64> {
        (0..self.nodes.len())
            .map(|i| {
                let nb = &self.adj[i];
                if nb.is_empty() {
                    f64::NAN
                } else {
                    nb.iter().map(|&j| self.degree(j) as f64).sum::<f64>() / nb.len() as f64
                }
            })
            .collect()
    }

    pub fn mean_clustering(&self, low_degree: LowDegree) -> f64 {
        let c = self.local_clustering();
        let kept: Vec<f64> = c
            .iter()
            .enumerate()
            .filter(|&(i, _)| low_degree == LowDegree::AsZero || self.degree(i) >= 2)
            .map(|(_, &v)| v)
            .collect();
        if kept.is_empty() {
            0.0
        } else {
            stats::mean(&kept)
        }
    }
}

/// Treatment of degree 0/1 nodes in clustering averages.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LowDegree {
    /// Included with clustering 0.
    #[default]
    AsZero,
    Exclude,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumRow {
    pub degree: u64,
    pub mean_value: f64,
    pub std_value: f64,
    pub n_nodes: usize,
}

/// Per-degree mean and population standard deviation of a node quantity.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DegreeSpectrum {
    pub rows: Vec<SpectrumRow>,
}

impl DegreeSpectrum {
    pub fn from_pairs<I>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (u64, f64)>,
    {
        let mut pairs: Vec<(u64, f64)> = pairs.into_iter().filter(|(_, v)| v.is_finite()).collect();
        pairs.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)));
        let rows = pairs
            .chunk_by(|a, b| a.0 == b.0)
            .map(|group| {
                let values: Vec<f64> = group.iter().map(|p| p.1).collect();
                SpectrumRow {
                    degree: group[0].0,
                    mean_value: stats::mean(&values),
                    std_value: stats::std_dev(&values),
                    n_nodes: values.len(),
                }
            })
            .collect();
        DegreeSpectrum { rows }
    }

    pub fn get(&self, degree: u64) -> Option<&SpectrumRow> {
        self.rows
            .binary_search_by_key(&degree, |r| r.degree)
            .ok()
            .map(|i| &self.rows[i])
    }

    pub fn log_bins(&self) -> Vec<stats::LogBin> {
        stats::log2_bins(self.rows.iter().map(|r| (r.degree, r.mean_value, r.n_nodes)))
    }

    /// Spearman correlation of the log-binned means against degree.
    pub fn log_binned_trend(&self) -> Option<f64> {
        stats::log_binned_trend(&self.log_bins())
    }
}

pub fn clustering_spectrum_of(graph: &SimpleGraph, low_degree: LowDegree) -> DegreeSpectrum {
    let c = graph.local_clustering();
    DegreeSpectrum::from_pairs(
        c.into_iter()
            .enumerate()
            .filter(|&(i, _)| low_degree == LowDegree::AsZero || graph.degree(i) >= 2)
            .map(|(i, v)| (graph.degree(i) as u64, v)),
    )
}

/// Local clustering averaged per total degree of the undirected projection.
pub fn clustering_spectrum(layer: &LayerView, low_degree: LowDegree) -> DegreeSpectrum {
    clustering_spectrum_of(&SimpleGraph::from_layer(layer), low_degree)
}

/// Mean neighbor degree averaged per degree of the undirected projection.
pub fn avg_neighbor_degree_spectrum(layer: &LayerView) -> DegreeSpectrum {
    let g = SimpleGraph::from_layer(layer);
    let knn = g.average_neighbor_degree();
    DegreeSpectrum::from_pairs(knn.into_iter().enumerate().map(|(i, v)| (g.degree(i) as u64, v)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(n: usize, edges: &[(usize, usize)]) -> SimpleGraph {
        SimpleGraph::from_index_edges((0..n as u64).map(UserId).collect(), edges.iter().copied())
    }

    #[test]
    fn triangle_has_unit_clustering() {
        let g = graph(3, &[(0, 1), (1, 2), (2, 0)]);
        assert_eq!(g.local_clustering(), vec![1.0, 1.0, 1.0]);
    }

    #[test]
    fn star_center_has_zero_clustering() {
        let g = graph(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]);
        assert_eq!(g.local_clustering()[0], 0.0);
        let s = DegreeSpectrum::from_pairs(
            g.average_neighbor_degree()
                .into_iter()
                .enumerate()
                .map(|(i, v)| (g.degree(i) as u64, v)),
        );
        assert_eq!(s.get(1).unwrap().mean_value, 4.0);
        assert_eq!(s.get(4).unwrap().mean_value, 1.0);
    }

    #[test]
    fn complete_graph_neighbor_degree() {
        let g = graph(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        assert!(g.average_neighbor_degree().iter().all(|&v| v == 3.0));
        assert!(g.local_clustering().iter().all(|&v| v == 1.0));
    }

    #[test]
    fn projection_collapses_parallel_and_reciprocal_edges() {
        let g = graph(2, &[(0, 1), (1, 0), (0, 1)]);
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.degree(0), 1);
    }

    #[test]
    fn low_degree_policy() {
        // triangle plus a pendant node attached to node 0
        let g = graph(4, &[(0, 1), (1, 2), (2, 0), (0, 3)]);
        let with = g.mean_clustering(LowDegree::AsZero);
        let without = g.mean_clustering(LowDegree::Exclude);
        assert!((with - (1.0 / 3.0 + 1.0 + 1.0) / 4.0).abs() < 1e-12);
        assert!((without - (1.0 / 3.0 + 1.0 + 1.0) / 3.0).abs() < 1e-12);
    }

    #[test]
    fn spectrum_std_is_population() {
        let s = DegreeSpectrum::from_pairs([(2, 0.0), (2, 1.0), (3, 0.5)]);
        let r = s.get(2).unwrap();
        assert_eq!(r.n_nodes, 2);
        assert_eq!(r.mean_value, 0.5);
        assert_eq!(r.std_value, 0.5);
        assert_eq!(s.get(3).unwrap().std_value, 0.0);
    }
}
