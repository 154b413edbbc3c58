//! Aggregate (time-less) distributions over layers and node metrics.

use crate::error::{Error, Result};
use crate::graph::{DegreeSpectrum, LowDegree, SimpleGraph};
use crate::model::{Layer, LayerView, MetricsMap};
use crate::stats::Distribution;

/// Distribution of edge weights (1..=10) on a layer.
pub fn weight_distribution(layer: &LayerView) -> Result<Distribution> {
    if layer.is_empty() {
        return Err(Error::EmptyData("weight distribution"));
    }
    Distribution::from_values(layer.edges().iter().map(|e| i64::from(e.weight)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReputationDistributions {
    /// Over users with `rho_plus > 0`.
    pub positive: Option<Distribution>,
    /// Over users with `rho_minus > 0`.
    pub negative: Option<Distribution>,
    /// Over all users, signed.
    pub global: Distribution,
}

/// Distributions of positive, negative and global reputation. Users with zero
/// positive (resp. negative) reputation are left out of that distribution.
pub fn reputation_distributions(metrics: &MetricsMap) -> Result<ReputationDistributions> {
    if metrics.is_empty() {
        return Err(Error::EmptyData("reputation distributions"));
    }
    let positive =
        Distribution::from_values(metrics.values().filter(|m| m.rho_plus > 0).map(|m| m.rho_plus as i64)).ok();
    let negative =
        Distribution::from_values(metrics.values().filter(|m| m.rho_minus > 0).map(|m| m.rho_minus as i64)).ok();
    let global = Distribution::from_values(metrics.values().map(|m| m.rho))?;
    Ok(ReputationDistributions {
        positive,
        negative,
        global,
    })
}

/// Mean and standard deviation of global reputation per in-degree level of
/// `layer`.
pub fn reputation_by_indegree(metrics: &MetricsMap, layer: Layer) -> Result<DegreeSpectrum> {
    if metrics.is_empty() {
        return Err(Error::EmptyData("reputation by in-degree"));
    }
    Ok(DegreeSpectrum::from_pairs(
        metrics.values().map(|m| (m.k_in(layer), m.rho as f64)),
    ))
}

/// How a sub-layer's mean clustering is averaged.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SublayerConvention {
    /// Over the sub-layer's own nodes, degree < 2 counted as 0.
    AsZero,
    /// Over the sub-layer's own nodes with degree >= 2.
    Exclude,
    /// Summed over sub-layer nodes, divided by the node count of the parent layer.
    ParentNodes,
}

impl SublayerConvention {
    pub const ALL: [SublayerConvention; 3] = [
        SublayerConvention::AsZero,
        SublayerConvention::Exclude,
        SublayerConvention::ParentNodes,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SublayerConvention::AsZero => "as-zero",
            SublayerConvention::Exclude => "exclude",
            SublayerConvention::ParentNodes => "parent-nodes",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SublayerClustering {
    /// `"w=1"` or `"w>1"`.
    pub sublayer: &'static str,
    pub convention: SublayerConvention,
    pub mean_clustering: f64,
    pub n_nodes: usize,
    pub n_edges: usize,
}

/// Mean clustering of the unit-weight and heavier-weight sub-layers of `layer`
/// under every averaging convention.
pub fn sublayer_clustering(layer: &LayerView) -> Vec<SublayerClustering> {
    let parent_nodes = layer.nodes().len();
    let mut out = Vec::new();
    for (name, sub) in [
        ("w=1", layer.with_weights(|w| w == 1)),
        ("w>1", layer.with_weights(|w| w > 1)),
    ] {
        let g = SimpleGraph::from_layer(&sub);
        for convention in SublayerConvention::ALL {
            let mean_clustering = match convention {
                SublayerConvention::AsZero => g.mean_clustering(LowDegree::AsZero),
                SublayerConvention::Exclude => g.mean_clustering(LowDegree::Exclude),
                SublayerConvention::ParentNodes if parent_nodes == 0 => 0.0,
                SublayerConvention::ParentNodes => g.local_clustering().iter().sum::<f64>() / parent_nodes as f64,
            };
            out.push(SublayerClustering {
                sublayer: name,
                convention,
                mean_clustering,
                n_nodes: g.node_count(),
                n_edges: g.edge_count(),
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{node_metrics, Cutoff, EventLog, NodeMetrics, RatingEvent, UserId};

    #[test]
    fn weights_three_three_seven() {
        let log = EventLog::from_events(vec![
            RatingEvent::new(UserId(1), UserId(2), 3, 0).unwrap(),
            RatingEvent::new(UserId(1), UserId(3), 3, 1).unwrap(),
            RatingEvent::new(UserId(2), UserId(3), 7, 2).unwrap(),
            RatingEvent::new(UserId(2), UserId(3), -2, 3).unwrap(),
        ]);
        let layer = LayerView::project(&log, Layer::Rewarding, Cutoff::End);
        let d = weight_distribution(&layer).unwrap();
        assert_eq!(d.support, vec![3, 7]);
        assert!((d.pmf[0] - 2.0 / 3.0).abs() < 1e-12);
        let empty = LayerView::project(&log, Layer::Punitive, Cutoff::At(0));
        assert!(weight_distribution(&empty).is_err());
    }

    #[test]
    fn positive_reputation_pmf() {
        let mut metrics = MetricsMap::new();
        for (u, rp) in [(1, 1), (2, 1), (3, 2), (4, 0)] {
            metrics.insert(
                UserId(u),
                NodeMetrics {
                    rho_plus: rp,
                    rho: rp as i64,
                    ..Default::default()
                },
            );
        }
        let d = reputation_distributions(&metrics).unwrap();
        let pos = d.positive.unwrap();
        assert_eq!(pos.support, vec![1, 2]);
        assert!((pos.pmf[0] - 2.0 / 3.0).abs() < 1e-12);
        assert!(d.negative.is_none());
        assert_eq!(d.global.total(), 4);
    }

    #[test]
    fn single_user_by_indegree() {
        let mut metrics = MetricsMap::new();
        metrics.insert(
            UserId(1),
            NodeMetrics {
                k_in_plus: 3,
                rho_plus: 5,
                rho: 5,
                ..Default::default()
            },
        );
        let s = reputation_by_indegree(&metrics, Layer::Rewarding).unwrap();
        let row = s.get(3).unwrap();
        assert_eq!((row.mean_value, row.std_value, row.n_nodes), (5.0, 0.0, 1));
    }

    #[test]
    fn sublayers_split_by_weight() {
        // unit-weight triangle 1-2-3 plus a heavy pendant edge 3-4
        let log = EventLog::from_events(vec![
            RatingEvent::new(UserId(1), UserId(2), 1, 0).unwrap(),
            RatingEvent::new(UserId(2), UserId(3), 1, 1).unwrap(),
            RatingEvent::new(UserId(3), UserId(1), 1, 2).unwrap(),
            RatingEvent::new(UserId(3), UserId(4), 5, 3).unwrap(),
        ]);
        let rows = sublayer_clustering(&LayerView::project(&log, Layer::Rewarding, Cutoff::End));
        let get = |s: &str, c: SublayerConvention| {
            rows.iter()
                .find(|r| r.sublayer == s && r.convention == c)
                .unwrap()
                .mean_clustering
        };
        assert_eq!(get("w=1", SublayerConvention::AsZero), 1.0);
        assert_eq!(get("w=1", SublayerConvention::ParentNodes), 0.75);
        assert_eq!(get("w>1", SublayerConvention::AsZero), 0.0);
        assert_eq!(get("w>1", SublayerConvention::Exclude), 0.0);
    }

    #[test]
    fn by_indegree_from_log() {
        let log = EventLog::from_events(vec![
            RatingEvent::new(UserId(1), UserId(2), 4, 0).unwrap(),
            RatingEvent::new(UserId(3), UserId(2), -1, 1).unwrap(),
        ]);
        let m = node_metrics(&log, Cutoff::End);
        let s = reputation_by_indegree(&m, Layer::Punitive).unwrap();
        assert_eq!(s.get(1).unwrap().mean_value, 3.0);
        assert_eq!(s.get(0).unwrap().n_nodes, 2);
    }
}
