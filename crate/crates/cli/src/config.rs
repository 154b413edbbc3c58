//! Run configuration: defaults, a flat `key=value` file, then command-line flags.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use wot_core::category::CategoryThresholds;
use wot_core::dynamics::GiniPopulation;
use wot_core::graph::LowDegree;
use wot_core::ingest::IngestMode;
use wot_core::temporal::TzShift;

use crate::Failure;

/// Values given on the command line; `None` means "not given".
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub input: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub tz_shift: Option<i32>,
    pub thresholds: Option<(f64, f64)>,
    pub topk: Option<usize>,
    pub null_samples: Option<usize>,
    pub seed: Option<u64>,
    pub mode: Option<IngestMode>,
    pub annotations: Option<PathBuf>,
    pub low_degree: Option<LowDegree>,
    pub gini_population: Option<GiniPopulation>,
    pub per_user_interevents: Option<bool>,
    pub users: Option<u64>,
    pub events: Option<usize>,
    pub positive_fraction: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub input: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub tz_shift: TzShift,
    pub thresholds: CategoryThresholds,
    pub topk: usize,
    pub null_samples: usize,
    pub seed: Option<u64>,
    pub mode: IngestMode,
    pub annotations: Option<PathBuf>,
    pub low_degree: LowDegree,
    pub gini_population: GiniPopulation,
    pub per_user_interevents: bool,
    pub users: u64,
    pub events: usize,
    pub positive_fraction: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            input: None,
            out: None,
            tz_shift: TzShift::hours(-6).expect("default shift is valid"),
            thresholds: CategoryThresholds::default(),
            topk: 10,
            null_samples: 20,
            seed: None,
            mode: IngestMode::Lenient,
            annotations: None,
            low_degree: LowDegree::AsZero,
            gini_population: GiniPopulation::Positive,
            per_user_interevents: false,
            users: 100,
            events: 1000,
            positive_fraction: 0.9,
        }
    }
}

pub fn parse_thresholds(s: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = s
        .split_once(',')
        .ok_or_else(|| format!("expected LOW,HIGH, got {s:?}"))?;
    let lo: f64 = lo.trim().parse().map_err(|_| format!("bad low threshold {lo:?}"))?;
    let hi: f64 = hi.trim().parse().map_err(|_| format!("bad high threshold {hi:?}"))?;
    CategoryThresholds::new(lo, hi).map_err(|e| e.to_string())?;
    Ok((lo, hi))
}

pub fn parse_mode(s: &str) -> Result<IngestMode, String> {
    match s {
        "strict" => Ok(IngestMode::Strict),
        "lenient" => Ok(IngestMode::Lenient),
        _ => Err(format!("mode must be strict or lenient, got {s:?}")),
    }
}

pub fn parse_low_degree(s: &str) -> Result<LowDegree, String> {
    match s {
        "as-zero" => Ok(LowDegree::AsZero),
        "exclude" => Ok(LowDegree::Exclude),
        _ => Err(format!("low-degree must be as-zero or exclude, got {s:?}")),
    }
}

pub fn parse_gini_population(s: &str) -> Result<GiniPopulation, String> {
    match s {
        "positive" => Ok(GiniPopulation::Positive),
        "all-seen" => Ok(GiniPopulation::AllSeen),
        _ => Err(format!("gini-population must be positive or all-seen, got {s:?}")),
    }
}

pub fn parse_tz_shift(s: &str) -> Result<i32, String> {
    let h: i32 = s.trim().parse().map_err(|_| format!("bad tz shift {s:?}"))?;
    TzShift::hours(h).map_err(|e| e.to_string())?;
    Ok(h)
}

fn parse_bool(s: &str) -> Result<bool, String> {
    match s {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        _ => Err(format!("expected a boolean, got {s:?}")),
    }
}

fn parse_num<T: FromStr>(s: &str) -> Result<T, String> {
    s.parse().map_err(|_| format!("bad number {s:?}"))
}

/// Parses a flat config file. Blank lines and `#` comments are ignored; keys
/// may use `-` or `_`.
pub fn parse_config_file(text: &str) -> Result<Overrides, String> {
    let mut o = Overrides::default();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("line {}: expected key=value", n + 1))?;
        let value = value.trim();
        let err = |e: String| format!("line {}: {e}", n + 1);
        match key.trim().replace('-', "_").as_str() {
            "input" => o.input = Some(value.into()),
            "out" => o.out = Some(value.into()),
            "tz_shift" => o.tz_shift = Some(parse_tz_shift(value).map_err(err)?),
            "thresholds" => o.thresholds = Some(parse_thresholds(value).map_err(err)?),
            "topk" => o.topk = Some(parse_num(value).map_err(err)?),
            "null_samples" => o.null_samples = Some(parse_num(value).map_err(err)?),
            "seed" => o.seed = Some(parse_num(value).map_err(err)?),
            "mode" => o.mode = Some(parse_mode(value).map_err(err)?),
            "annotations" => o.annotations = Some(value.into()),
            "low_degree" => o.low_degree = Some(parse_low_degree(value).map_err(err)?),
            "gini_population" => o.gini_population = Some(parse_gini_population(value).map_err(err)?),
            "per_user_interevents" => o.per_user_interevents = Some(parse_bool(value).map_err(err)?),
            "users" => o.users = Some(parse_num(value).map_err(err)?),
            "events" => o.events = Some(parse_num(value).map_err(err)?),
            "positive_fraction" => o.positive_fraction = Some(parse_num(value).map_err(err)?),
            other => return Err(format!("line {}: unknown key {other:?}", n + 1)),
        }
    }
    Ok(o)
}

impl RunConfig {
    /// Defaults, then `file` (if any), then `flags`.
    pub fn resolve(file: Option<&Path>, flags: &Overrides) -> Result<RunConfig, Failure> {
        let mut cfg = RunConfig::default();
        if let Some(path) = file {
            let text = fs::read_to_string(path)
                .map_err(|e| Failure::Usage(format!("cannot read config {}: {e}", path.display())))?;
            let from_file =
                parse_config_file(&text).map_err(|e| Failure::Usage(format!("config {}: {e}", path.display())))?;
            cfg.apply(&from_file)?;
        }
        cfg.apply(flags)?;
        Ok(cfg)
    }

    fn apply(&mut self, o: &Overrides) -> Result<(), Failure> {
        let usage = |e: wot_core::Error| Failure::Usage(e.to_string());
        if let Some(v) = &o.input {
            self.input = Some(v.clone());
        }
        if let Some(v) = &o.out {
            self.out = Some(v.clone());
        }
        if let Some(h) = o.tz_shift {
            self.tz_shift = TzShift::hours(h).map_err(usage)?;
        }
        if let Some((lo, hi)) = o.thresholds {
            self.thresholds = CategoryThresholds::new(lo, hi).map_err(usage)?;
        }
        if let Some(k) = o.topk {
            if k == 0 {
                return Err(Failure::Usage("--topk must be at least 1".into()));
            }
            self.topk = k;
        }
        if let Some(n) = o.null_samples {
            if n == 0 {
                return Err(Failure::Usage("--null-samples must be at least 1".into()));
            }
            self.null_samples = n;
        }
        if let Some(s) = o.seed {
            self.seed = Some(s);
        }
        if let Some(m) = o.mode {
            self.mode = m;
        }
        if let Some(v) = &o.annotations {
            self.annotations = Some(v.clone());
        }
        if let Some(v) = o.low_degree {
            self.low_degree = v;
        }
        if let Some(v) = o.gini_population {
            self.gini_population = v;
        }
        if let Some(v) = o.per_user_interevents {
            self.per_user_interevents = v;
        }
        if let Some(v) = o.users {
            self.users = v;
        }
        if let Some(v) = o.events {
            self.events = v;
        }
        if let Some(p) = o.positive_fraction {
            if !(0.0..=1.0).contains(&p) {
                return Err(Failure::Usage("--positive-fraction must lie in [0,1]".into()));
            }
            self.positive_fraction = p;
        }
        Ok(())
    }

    pub fn require_seed(&self, what: &str) -> Result<u64, Failure> {
        self.seed
            .ok_or_else(|| Failure::Usage(format!("--seed is required for {what}")))
    }

    pub fn require_out(&self) -> Result<&Path, Failure> {
        self.out
            .as_deref()
            .ok_or_else(|| Failure::Usage("--out is required for this command".into()))
    }

    /// Flat description for the manifest.
    pub fn describe(&self) -> BTreeMap<&'static str, String> {
        let path = |p: &Option<PathBuf>| p.as_ref().map(|p| p.display().to_string()).unwrap_or_default();
        BTreeMap::from([
            ("input", path(&self.input)),
            ("out", path(&self.out)),
            ("tz_shift", self.tz_shift.get().to_string()),
            (
                "thresholds",
                format!("{},{}", self.thresholds.low(), self.thresholds.high()),
            ),
            ("topk", self.topk.to_string()),
            ("null_samples", self.null_samples.to_string()),
            ("seed", self.seed.map(|s| s.to_string()).unwrap_or_default()),
            (
                "mode",
                match self.mode {
                    IngestMode::Strict => "strict",
                    IngestMode::Lenient => "lenient",
                }
                .into(),
            ),
            ("annotations", path(&self.annotations)),
            (
                "low_degree",
                match self.low_degree {
                    LowDegree::AsZero => "as-zero",
                    LowDegree::Exclude => "exclude",
                }
                .into(),
            ),
            (
                "gini_population",
                match self.gini_population {
                    GiniPopulation::Positive => "positive",
                    GiniPopulation::AllSeen => "all-seen",
                }
                .into(),
            ),
            ("per_user_interevents", self.per_user_interevents.to_string()),
            ("users", self.users.to_string()),
            ("events", self.events.to_string()),
            ("positive_fraction", self.positive_fraction.to_string()),
        ])
    }
}
