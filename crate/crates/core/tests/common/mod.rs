#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use wot_core::{EventLog, RatingEvent, UserId};

pub fn ev(rater: u64, ratee: u64, score: i64, t: i64) -> RatingEvent {
    RatingEvent::new(UserId(rater), UserId(ratee), score, t).unwrap()
}

/// Log from raw tuples, dropping self-ratings and zero scores.
pub fn log_from(raw: &[(u64, u64, i64, i64)]) -> EventLog {
    EventLog::from_events(
        raw.iter()
            .filter(|r| r.0 != r.1 && r.2 != 0)
            .map(|&(a, b, s, t)| ev(a, b, s, t))
            .collect(),
    )
}

/// Undirected simple adjacency sets built by brute force from an edge list.
pub fn adjacency(edges: &[(u64, u64)]) -> BTreeMap<u64, BTreeSet<u64>> {
    let mut adj: BTreeMap<u64, BTreeSet<u64>> = BTreeMap::new();
    for &(a, b) in edges {
        if a == b {
            continue;
        }
        adj.entry(a).or_default().insert(b);
        adj.entry(b).or_default().insert(a);
    }
    adj
}

/// Local clustering by enumerating every neighbor pair.
pub fn brute_clustering(adj: &BTreeMap<u64, BTreeSet<u64>>) -> BTreeMap<u64, f64> {
    adj.iter()
        .map(|(&i, nb)| {
            let nb: Vec<u64> = nb.iter().copied().collect();
            let d = nb.len();
            if d < 2 {
                return (i, 0.0);
            }
            let mut closed = 0;
            for x in 0..d {
                for y in (x + 1)..d {
                    if adj[&nb[x]].contains(&nb[y]) {
                        closed += 1;
                    }
                }
            }
            (i, closed as f64 / (d * (d - 1) / 2) as f64)
        })
        .collect()
}

pub fn brute_neighbor_degree(adj: &BTreeMap<u64, BTreeSet<u64>>) -> BTreeMap<u64, f64> {
    adj.iter()
        .map(|(&i, nb)| {
            let s: usize = nb.iter().map(|j| adj[j].len()).sum();
            (i, s as f64 / nb.len() as f64)
        })
        .collect()
}

/// Tau-b by counting all pairs.
pub fn brute_tau_b(x: &[f64], y: &[f64]) -> Option<f64> {
    let n = x.len();
    let (mut conc, mut disc, mut tx, mut ty) = (0i64, 0i64, 0i64, 0i64);
    for i in 0..n {
        for j in (i + 1)..n {
            let dx = x[i] - x[j];
            let dy = y[i] - y[j];
            if dx == 0.0 && dy == 0.0 {
                continue;
            } else if dx == 0.0 {
                tx += 1;
            } else if dy == 0.0 {
                ty += 1;
            } else if (dx > 0.0) == (dy > 0.0) {
                conc += 1;
            } else {
                disc += 1;
            }
        }
    }
    let denom = (((conc + disc + tx) * (conc + disc + ty)) as f64).sqrt();
    (denom > 0.0).then(|| (conc - disc) as f64 / denom)
}

/// Extended Jaccard by materialising each prefix pair.
pub fn brute_extended_jaccard(a: &[u64], b: &[u64], k: usize) -> f64 {
    let mut sum = 0.0;
    for d in 1..=k {
        let pa: BTreeSet<u64> = a.iter().take(d).copied().collect();
        let pb: BTreeSet<u64> = b.iter().take(d).copied().collect();
        let union = pa.union(&pb).count();
        sum += if union == 0 {
            1.0
        } else {
            pa.intersection(&pb).count() as f64 / union as f64
        };
    }
    sum / k as f64
}
