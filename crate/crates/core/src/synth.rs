//! Seeded synthetic rating logs for offline testing.

use rand::distributions::{Distribution as _, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp;

use crate::error::{Error, Result};
use crate::model::{EventLog, RatingEvent, Timestamp, UserId};

/// Distribution of the absolute score `|s|` in `1..=10`.
#[derive(Debug, Clone, PartialEq)]
pub enum ScoreDistribution {
    Uniform,
    /// Relative weights for magnitudes 1 through 10.
    Weighted([f64; 10]),
}

#[derive(Debug, Clone, PartialEq)]
pub enum TimeModel {
    /// Timestamps drawn uniformly in `[start, end]`.
    Uniform { start: Timestamp, end: Timestamp },
    /// Homogeneous Poisson process with `rate` events per second.
    Poisson { start: Timestamp, rate: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthConfig {
    pub n_users: u64,
    pub n_events: usize,
    pub positive_fraction: f64,
    pub score_distribution: ScoreDistribution,
    pub time_model: TimeModel,
    pub seed: u64,
}

impl SynthConfig {
    pub fn new(n_users: u64, n_events: usize, seed: u64) -> Self {
        SynthConfig {
            n_users,
            n_events,
            positive_fraction: 0.9,
            score_distribution: ScoreDistribution::Uniform,
            // 2011-01-01 .. 2016-12-31 UTC
            time_model: TimeModel::Uniform {
                start: 1_293_840_000,
                end: 1_483_228_799,
            },
            seed,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n_users < 2 {
            return Err(Error::InvalidConfig("n_users must be at least 2".into()));
        }
        if !(0.0..=1.0).contains(&self.positive_fraction) {
            return Err(Error::InvalidConfig("positive_fraction must lie in [0,1]".into()));
        }
        if let ScoreDistribution::Weighted(w) = &self.score_distribution {
            if w.iter().any(|x| !x.is_finite() || *x < 0.0) || w.iter().sum::<f64>() <= 0.0 {
                return Err(Error::InvalidConfig(
                    "score weights must be non-negative with positive sum".into(),
                ));
            }
        }
        match self.time_model {
            TimeModel::Uniform { start, end } if start > end => {
                Err(Error::InvalidConfig("time window start after end".into()))
            }
            TimeModel::Poisson { rate, .. } if !(rate.is_finite() && rate > 0.0) => {
                Err(Error::InvalidConfig("poisson rate must be positive".into()))
            }
            _ => Ok(()),
        }
    }
}

pub fn synth_log(config: &SynthConfig) -> Result<EventLog> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let magnitudes = match &config.score_distribution {
        ScoreDistribution::Uniform => WeightedIndex::new([1.0; 10]),
        ScoreDistribution::Weighted(w) => WeightedIndex::new(w),
    }
    .map_err(|e| Error::InvalidConfig(e.to_string()))?;

    let mut clock = match config.time_model {
        TimeModel::Uniform { start, .. } | TimeModel::Poisson { start, .. } => start as f64,
    };
    let gaps = match config.time_model {
        TimeModel::Poisson { rate, .. } => Some(Exp::new(rate).map_err(|e| Error::InvalidConfig(e.to_string()))?),
        TimeModel::Uniform { .. } => None,
    };

    let mut events = Vec::with_capacity(config.n_events);
    for _ in 0..config.n_events {
        let rater = rng.gen_range(0..config.n_users);
        let mut ratee = rng.gen_range(0..config.n_users - 1);
        if ratee >= rater {
            ratee += 1;
        }
        let magnitude = magnitudes.sample(&mut rng) as i64 + 1;
        let score = if rng.gen_bool(config.positive_fraction) {
            magnitude
        } else {
            -magnitude
        };
        let timestamp = match (&config.time_model, &gaps) {
            (TimeModel::Uniform { start, end }, _) => rng.gen_range(*start..=*end),
            (_, Some(exp)) => {
                clock += exp.sample(&mut rng);
                clock.floor() as Timestamp
            }
            _ => unreachable!("poisson model always has a gap distribution"),
        };
        events.push(RatingEvent::new(UserId(rater), UserId(ratee), score, timestamp)?);
    }
    Ok(EventLog::from_events(events))
}
