//! Node rankings and tie-aware Kendall rank correlation.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::model::{MetricsMap, NodeMetrics, UserId};

/// Kendall tau-b of paired samples, in `O(n log n)`.
///
/// Pairs tied in one variable count toward that variable's tie total only;
/// pairs tied in both count toward neither.
pub fn tau_b(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::UserSetMismatch);
    }
    let n = x.len();
    if n < 2 {
        return Err(Error::Degenerate("tau needs at least two observations"));
    }
    let mut pairs: Vec<(f64, f64)> = x.iter().copied().zip(y.iter().copied()).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));

    let n0 = (n * (n - 1) / 2) as f64;
    let ties_x = tie_pairs(&pairs, |a, b| a.0 == b.0);
    let ties_xy = tie_pairs(&pairs, |a, b| a.0 == b.0 && a.1 == b.1);

    let mut ys: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    let mut buf = vec![0.0; n];
    let swaps = merge_count(&mut ys, &mut buf) as f64;
    let ties_y = tie_pairs(&ys, |a, b| a == b);

    let denom = ((n0 - ties_x as f64) * (n0 - ties_y as f64)).sqrt();
    if denom == 0.0 {
        return Err(Error::Degenerate("a ranking is constant"));
    }
    let concordant_minus_discordant = n0 - ties_x as f64 - ties_y as f64 + ties_xy as f64 - 2.0 * swaps;
    Ok((concordant_minus_discordant / denom).clamp(-1.0, 1.0))
}

/// Number of tied pairs among runs of consecutive equal items.
fn tie_pairs<T, F>(sorted: &[T], eq: F) -> u64
where
    F: Fn(&T, &T) -> bool,
{
    let mut total = 0u64;
    let mut run = 1u64;
    for w in sorted.windows(2) {
        if eq(&w[0], &w[1]) {
            run += 1;
        } else {
            total += run * (run - 1) / 2;
            run = 1;
        }
    }
    total + run * (run - 1) / 2
}

/// Merge sort counting strict inversions.
fn merge_count(v: &mut [f64], buf: &mut [f64]) -> u64 {
    let n = v.len();
    if n < 2 {
        return 0;
    }
    let mid = n / 2;
    let mut swaps = merge_count(&mut v[..mid], &mut buf[..mid]) + merge_count(&mut v[mid..], &mut buf[mid..]);
    let (mut i, mut j, mut k) = (0, mid, 0);
    while i < mid && j < n {
        if v[j] < v[i] {
            buf[k] = v[j];
            swaps += (mid - i) as u64;
            j += 1;
        } else {
            buf[k] = v[i];
            i += 1;
        }
        k += 1;
    }
    buf[k..k + mid - i].copy_from_slice(&v[i..mid]);
    k += mid - i;
    buf[k..k + n - j].copy_from_slice(&v[j..n]);
    v.copy_from_slice(&buf[..n]);
    swaps
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RankingKey {
    KInPlus,
    KInMinus,
    KOutPlus,
    KOutMinus,
    Rho,
}

impl RankingKey {
    pub const ALL: [RankingKey; 5] = [
        RankingKey::KInPlus,
        RankingKey::KInMinus,
        RankingKey::KOutPlus,
        RankingKey::KOutMinus,
        RankingKey::Rho,
    ];

    pub fn label(self) -> &'static str {
        match self {
            RankingKey::KInPlus => "k_in_plus",
            RankingKey::KInMinus => "k_in_minus",
            RankingKey::KOutPlus => "k_out_plus",
            RankingKey::KOutMinus => "k_out_minus",
            RankingKey::Rho => "rho",
        }
    }

    pub fn value(self, m: &NodeMetrics) -> f64 {
        match self {
            RankingKey::KInPlus => m.k_in_plus as f64,
            RankingKey::KInMinus => m.k_in_minus as f64,
            RankingKey::KOutPlus => m.k_out_plus as f64,
            RankingKey::KOutMinus => m.k_out_minus as f64,
            RankingKey::Rho => m.rho as f64,
        }
    }
}

/// Users ordered by descending value, ties by ascending id. Values are kept
/// so that correlations can treat equal values as ties.
#[derive(Debug, Clone, PartialEq)]
pub struct Ranking {
    entries: Vec<(UserId, f64)>,
}

impl Ranking {
    pub fn new<I>(values: I) -> Self
    where
        I: IntoIterator<Item = (UserId, f64)>,
    {
        let mut entries: Vec<(UserId, f64)> = values.into_iter().collect();
        entries.sort_by(descending_then_id);
        Ranking { entries }
    }

    pub fn by_key(metrics: &MetricsMap, key: RankingKey) -> Self {
        Self::new(metrics.iter().map(|(&u, m)| (u, key.value(m))))
    }

    pub fn users(&self) -> impl Iterator<Item = UserId> + '_ {
        self.entries.iter().map(|e| e.0)
    }

    pub fn entries(&self) -> &[(UserId, f64)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    fn values_by_user(&self) -> Vec<(UserId, f64)> {
        let mut v = self.entries.clone();
        v.sort_by_key(|e| e.0);
        v
    }
}

pub(crate) fn descending_then_id(a: &(UserId, f64), b: &(UserId, f64)) -> Ordering {
    b.1.total_cmp(&a.1).then(a.0.cmp(&b.0))
}

/// Tau-b between two rankings of the same user set, on their values.
pub fn kendall_tau(a: &Ranking, b: &Ranking) -> Result<f64> {
    let va = a.values_by_user();
    let vb = b.values_by_user();
    if va.len() != vb.len() || va.iter().zip(&vb).any(|(x, y)| x.0 != y.0) {
        return Err(Error::UserSetMismatch);
    }
    let xs: Vec<f64> = va.iter().map(|e| e.1).collect();
    let ys: Vec<f64> = vb.iter().map(|e| e.1).collect();
    tau_b(&xs, &ys)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankingTable {
    pub rankings: Vec<(RankingKey, Ranking)>,
}

impl RankingTable {
    pub fn get(&self, key: RankingKey) -> &Ranking {
        &self
            .rankings
            .iter()
            .find(|(k, _)| *k == key)
            .expect("all keys present")
            .1
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankRow {
    pub rank: usize,
    pub user: UserId,
    pub metrics: NodeMetrics,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankingReport {
    pub table: RankingTable,
    /// Indexed as `RankingKey::ALL`; `NaN` where a ranking is constant.
    pub tau: [[f64; 5]; 5],
    /// All quantities in `k_in_plus` rank order.
    pub by_k_in_plus: Vec<RankRow>,
}

impl RankingReport {
    pub fn tau(&self, a: RankingKey, b: RankingKey) -> f64 {
        let i = RankingKey::ALL.iter().position(|&k| k == a).unwrap();
        let j = RankingKey::ALL.iter().position(|&k| k == b).unwrap();
        self.tau[i][j]
    }
}

pub fn ranking_report(metrics: &MetricsMap) -> Result<RankingReport> {
    if metrics.is_empty() {
        return Err(Error::EmptyData("ranking report"));
    }
    let rankings: Vec<(RankingKey, Ranking)> = RankingKey::ALL
        .iter()
        .map(|&k| (k, Ranking::by_key(metrics, k)))
        .collect();
    let mut tau = [[1.0; 5]; 5];
    for i in 0..5 {
        for j in (i + 1)..5 {
            let t = kendall_tau(&rankings[i].1, &rankings[j].1).unwrap_or(f64::NAN);
            tau[i][j] = t;
            tau[j][i] = t;
        }
    }
    let table = RankingTable { rankings };
    let by_k_in_plus = table
        .get(RankingKey::KInPlus)
        .users()
        .enumerate()
        .map(|(i, u)| RankRow {
            rank: i + 1,
            user: u,
            metrics: metrics[&u],
        })
        .collect();
    Ok(RankingReport {
        table,
        tau,
        by_k_in_plus,
    })
}
