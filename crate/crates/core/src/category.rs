//! User categories in the (positive, negative) reputation plane.
//!
//! A user's negative fraction `r = rho_minus / (rho_plus + rho_minus)` places
//! them as trustworthy (`r < low`), controversial (`low <= r <= high`) or
//! untrusted (`r > high`). Users without any received rating are
//! uncategorized.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::model::{MetricsMap, NodeMetrics, UserId};
use crate::stats::quantile_sorted;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CategoryLabel {
    Trustworthy,
    Controversial,
    Untrusted,
    Uncategorized,
}

impl CategoryLabel {
    pub const CATEGORIZED: [CategoryLabel; 3] = [
        CategoryLabel::Trustworthy,
        CategoryLabel::Controversial,
        CategoryLabel::Untrusted,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CategoryLabel::Trustworthy => "trustworthy",
            CategoryLabel::Controversial => "controversial",
            CategoryLabel::Untrusted => "untrusted",
            CategoryLabel::Uncategorized => "uncategorized",
        }
    }
}

impl fmt::Display for CategoryLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CategoryThresholds {
    low: f64,
    high: f64,
}

impl CategoryThresholds {
    pub fn new(low: f64, high: f64) -> Result<Self> {
        if !(low > 0.0 && low < 0.5 && high > 0.5 && high < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "thresholds need 0 < low < 0.5 < high < 1, got {low},{high}"
            )));
        }
        Ok(CategoryThresholds { low, high })
    }

    pub fn low(&self) -> f64 {
        self.low
    }

    pub fn high(&self) -> f64 {
        self.high
    }
}

impl Default for CategoryThresholds {
    fn default() -> Self {
        CategoryThresholds { low: 0.25, high: 0.75 }
    }
}

/// Negative fraction of total received reputation, `None` when nothing was received.
pub fn negative_fraction(m: &NodeMetrics) -> Option<f64> {
    let total = m.rho_plus + m.rho_minus;
    (total > 0).then(|| m.rho_minus as f64 / total as f64)
}

pub fn label_of(m: &NodeMetrics, thresholds: &CategoryThresholds) -> CategoryLabel {
    match negative_fraction(m) {
        None => CategoryLabel::Uncategorized,
        Some(r) if r < thresholds.low => CategoryLabel::Trustworthy,
        Some(r) if r > thresholds.high => CategoryLabel::Untrusted,
        Some(_) => CategoryLabel::Controversial,
    }
}

pub type Labels = BTreeMap<UserId, CategoryLabel>;

pub fn categorize(metrics: &MetricsMap, thresholds: &CategoryThresholds) -> Labels {
    metrics.iter().map(|(&u, m)| (u, label_of(m, thresholds))).collect()
}

/// Five-number summary plus the raw values, ready for violin plots.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Summary {
    pub n: usize,
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
    /// Sorted ascending.
    pub values: Vec<f64>,
}

impl Summary {
    pub fn of(mut values: Vec<f64>) -> Self {
        values.sort_by(f64::total_cmp);
        if values.is_empty() {
            return Summary {
                n: 0,
                min: f64::NAN,
                q1: f64::NAN,
                median: f64::NAN,
                q3: f64::NAN,
                max: f64::NAN,
                values,
            };
        }
        Summary {
            n: values.len(),
            min: values[0],
            q1: quantile_sorted(&values, 0.25),
            median: quantile_sorted(&values, 0.5),
            q3: quantile_sorted(&values, 0.75),
            max: values[values.len() - 1],
            values,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CategorySummary {
    pub label: CategoryLabel,
    pub n_users: usize,
    pub rho: Summary,
    pub k_out_plus: Summary,
    pub k_out_minus: Summary,
    /// `k_out_plus + k_out_minus`.
    pub activity: Summary,
}

/// Summaries for the three labeled categories, in `CATEGORIZED` order. Empty
/// categories are present with zero counts.
pub fn category_summary(metrics: &MetricsMap, labels: &Labels) -> Vec<CategorySummary> {
    CategoryLabel::CATEGORIZED
        .iter()
        .map(|&label| {
            let members: Vec<&NodeMetrics> = labels
                .iter()
                .filter(|(_, &l)| l == label)
                .filter_map(|(u, _)| metrics.get(u))
                .collect();
            let pick = |f: &dyn Fn(&NodeMetrics) -> f64| Summary::of(members.iter().map(|m| f(m)).collect());
            CategorySummary {
                label,
                n_users: members.len(),
                rho: pick(&|m| m.rho as f64),
                k_out_plus: pick(&|m| m.k_out_plus as f64),
                k_out_minus: pick(&|m| m.k_out_minus as f64),
                activity: pick(&|m| m.k_out_total() as f64),
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatterPoint {
    pub user: UserId,
    /// Aggregate in-degree over both layers.
    pub k_in: u64,
    pub rho: i64,
    pub label: CategoryLabel,
}

/// A limit growth line `rho = slope * k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceLine {
    pub name: &'static str,
    pub slope: i64,
}

pub const REFERENCE_LINES: [ReferenceLine; 3] = [
    ReferenceLine {
        name: "rho=10k",
        slope: 10,
    },
    ReferenceLine {
        name: "rho=k",
        slope: 1,
    },
    ReferenceLine {
        name: "rho=-10k",
        slope: -10,
    },
];

#[derive(Debug, Clone, PartialEq)]
pub struct Scatter {
    pub points: Vec<ScatterPoint>,
    pub lines: [ReferenceLine; 3],
}

pub fn reputation_vs_indegree_scatter(metrics: &MetricsMap, labels: &Labels) -> Scatter {
    let points = metrics
        .iter()
        .map(|(&u, m)| ScatterPoint {
            user: u,
            k_in: m.k_in_total(),
            rho: m.rho,
            label: labels.get(&u).copied().unwrap_or(CategoryLabel::Uncategorized),
        })
        .collect();
    Scatter {
        points,
        lines: REFERENCE_LINES,
    }
}
