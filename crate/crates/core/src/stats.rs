//! Small descriptive-statistics toolkit shared by the analyses.

use crate::error::{Error, Result};

/// Empirical distribution over integer values.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    /// Sorted distinct values.
    pub support: Vec<i64>,
    pub counts: Vec<u64>,
    pub pmf: Vec<f64>,
    /// `P(X >= support[i])`.
    pub ccdf: Vec<f64>,
}

impl Distribution {
    pub fn from_values<I>(values: I) -> Result<Self>
    where
        I: IntoIterator<Item = i64>,
    {
        let mut values: Vec<i64> = values.into_iter().collect();
        if values.is_empty() {
            return Err(Error::EmptyData("distribution"));
        }
        values.sort_unstable();
        let n = values.len() as f64;
        let mut support = Vec::new();
        let mut counts: Vec<u64> = Vec::new();
        for v in values {
            if support.last() == Some(&v) {
                *counts.last_mut().unwrap() += 1;
            } else {
                support.push(v);
                counts.push(1);
            }
        }
        let pmf: Vec<f64> = counts.iter().map(|&c| c as f64 / n).collect();
        let mut ccdf = vec![0.0; counts.len()];
        let mut tail = 0u64;
        for i in (0..counts.len()).rev() {
            tail += counts[i];
            ccdf[i] = tail as f64 / n;
        }
        Ok(Distribution {
            support,
            counts,
            pmf,
            ccdf,
        })
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn pmf_of(&self, value: i64) -> f64 {
        self.support.binary_search(&value).map(|i| self.pmf[i]).unwrap_or(0.0)
    }

    /// `P(X >= x)` for arbitrary `x`.
    pub fn ccdf_at(&self, x: f64) -> f64 {
        let idx = self.support.partition_point(|&v| (v as f64) < x);
        self.ccdf.get(idx).copied().unwrap_or(0.0)
    }

    /// Most frequent value; the smallest one wins ties.
    pub fn mode(&self) -> i64 {
        let mut best = 0;
        for i in 1..self.counts.len() {
            if self.counts[i] > self.counts[best] {
                best = i;
            }
        }
        self.support[best]
    }

    /// CCDF evaluated at logarithmically spaced points `base^j` covering the
    /// positive part of the support.
    pub fn log_binned_ccdf(&self, base: f64) -> Vec<(f64, f64)> {
        let Some(&max) = self.support.last() else {
            return Vec::new();
        };
        let Some(&min_pos) = self.support.iter().find(|&&v| v > 0) else {
            return Vec::new();
        };
        let mut x = base.powf((min_pos as f64).log(base).floor());
        let mut out = Vec::new();
        while x <= max as f64 * base {
            let p = self.ccdf_at(x);
            if p > 0.0 {
                out.push((x, p));
            }
            x *= base;
        }
        out
    }

    /// Squared Pearson correlation of `(ln x, ln ccdf)` at log-spaced points in
    /// `[lo, hi]`; a value close to 1 means the tail is straight on log-log axes.
    pub fn loglog_linearity(&self, lo: f64, hi: f64) -> Option<f64> {
        let points: Vec<(f64, f64)> = self
            .log_binned_ccdf(10f64.powf(0.1))
            .into_iter()
            .filter(|&(x, p)| x >= lo && x <= hi && p > 0.0)
            .map(|(x, p)| (x.ln(), p.ln()))
            .collect();
        if points.len() < 3 {
            return None;
        }
        let (xs, ys): (Vec<f64>, Vec<f64>) = points.into_iter().unzip();
        pearson(&xs, &ys).map(|r| r * r)
    }
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Population standard deviation.
pub fn std_dev(xs: &[f64]) -> f64 {
    let m = mean(xs);
    (xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / xs.len() as f64).sqrt()
}

/// Linear-interpolation quantile of sorted data, `q` in `[0,1]`.
pub fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    if sorted.is_empty() {
        return f64::NAN;
    }
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    quantile_sorted(&v, 0.5)
}

pub fn pearson(xs: &[f64], ys: &[f64]) -> Option<f64> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return None;
    }
    let mx = mean(xs);
    let my = mean(ys);
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx).powi(2);
        syy += (y - my).powi(2);
    }
    if sxx == 0.0 || syy == 0.0 {
        return None;
    }
    Some(sxy / (sxx * syy).sqrt())
}

/// Ranks starting at 1, ties receive their average rank.
pub fn average_ranks(xs: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..xs.len()).collect();
    order.sort_by(|&a, &b| xs[a].total_cmp(&xs[b]));
    let mut ranks = vec![0.0; xs.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && xs[order[j + 1]] == xs[order[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            ranks[k] = avg;
        }
        i = j + 1;
    }
    ranks
}

pub fn spearman(xs: &[f64], ys: &[f64]) -> Option<f64> {
    if xs.len() != ys.len() {
        return None;
    }
    pearson(&average_ranks(xs), &average_ranks(ys))
}

/// A node-weighted bin of a degree spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogBin {
    pub lower: u64,
    pub upper: u64,
    /// Node-weighted mean degree inside the bin.
    pub center: f64,
    pub mean: f64,
    pub n_nodes: usize,
}

/// Groups `(degree, mean, n_nodes)` rows into bins `[2^j, 2^(j+1))`.
/// Degree 0 rows are dropped.
pub fn log2_bins<I>(rows: I) -> Vec<LogBin>
where
    I: IntoIterator<Item = (u64, f64, usize)>,
{
    let mut bins: Vec<(u32, f64, f64, usize)> = Vec::new();
    for (degree, value, n) in rows {
        if degree == 0 || n == 0 || !value.is_finite() {
            continue;
        }
        let j = 63 - degree.leading_zeros();
        let w = n as f64;
        match bins.iter_mut().find(|b| b.0 == j) {
            Some(b) => {
                b.1 += degree as f64 * w;
                b.2 += value * w;
                b.3 += n;
            }
            None => bins.push((j, degree as f64 * w, value * w, n)),
        }
    }
    bins.sort_by_key(|b| b.0);
    bins.into_iter()
        .map(|(j, dsum, vsum, n)| LogBin {
            lower: 1 << j,
            upper: (1u64 << (j + 1)) - 1,
            center: dsum / n as f64,
            mean: vsum / n as f64,
            n_nodes: n,
        })
        .collect()
}

/// Spearman correlation between bin centers and bin means.
pub fn log_binned_trend(bins: &[LogBin]) -> Option<f64> {
    let xs: Vec<f64> = bins.iter().map(|b| b.center).collect();
    let ys: Vec<f64> = bins.iter().map(|b| b.mean).collect();
    spearman(&xs, &ys)
}
