use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use wot_core::dynamics::GiniPopulation;
use wot_core::graph::LowDegree;
use wot_core::ingest::IngestMode;

use crate::config::{parse_gini_population, parse_low_degree, parse_mode, parse_thresholds, parse_tz_shift, Overrides};

#[derive(Debug, Parser)]
#[command(name = "wot", version, about = "Signed two-layer analytics for peer-rating logs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Parse the input and report kept and rejected records.
    IngestCheck,
    /// Print user, event and layer counts.
    Summary,
    /// Distributions, clustering with null model, neighbor degree, rank correlations.
    Static,
    /// Trustworthy / controversial / untrusted categorization.
    Categories,
    /// Daily series, interevent times, burstiness, circadian and weekly profiles.
    Temporal,
    /// Daily snapshots: Gini series and top-k stability.
    Dynamics,
    /// Flattened reputation trajectories.
    Trajectories,
    /// Write a seeded synthetic log to <out>/synthetic.csv.
    Synth,
    /// static, categories, temporal, dynamics and trajectories in one run.
    All,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::IngestCheck => "ingest-check",
            Command::Summary => "summary",
            Command::Static => "static",
            Command::Categories => "categories",
            Command::Temporal => "temporal",
            Command::Dynamics => "dynamics",
            Command::Trajectories => "trajectories",
            Command::Synth => "synth",
            Command::All => "all",
        }
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// Rating log, plain or gzip CSV.
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Output directory, created if absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Flat key=value config file; flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Whole-hour shift applied to timestamps in time-of-day exports [default: -6].
    #[arg(long, global = true, allow_hyphen_values = true, value_parser = parse_tz_shift)]
    pub tz_shift: Option<i32>,
    /// Category thresholds on the negative fraction, LOW,HIGH [default: 0.25,0.75].
    #[arg(long, global = true, value_name = "LOW,HIGH", value_parser = parse_thresholds)]
    pub thresholds: Option<(f64, f64)>,
    /// Top-k list length [default: 10].
    #[arg(long, global = true)]
    pub topk: Option<usize>,
    /// Configuration-model samples [default: 20].
    #[arg(long, global = true)]
    pub null_samples: Option<usize>,
    /// Master seed; required by randomized steps.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// strict or lenient [default: lenient].
    #[arg(long, global = true, value_parser = parse_mode)]
    pub mode: Option<IngestMode>,
    /// CSV of label,start_date,end_date windows joined onto daily series.
    #[arg(long, global = true)]
    pub annotations: Option<PathBuf>,
    /// Degree < 2 nodes in clustering means: as-zero or exclude [default: as-zero].
    #[arg(long, global = true, value_parser = parse_low_degree)]
    pub low_degree: Option<LowDegree>,
    /// Gini population: positive or all-seen [default: positive].
    #[arg(long, global = true, value_parser = parse_gini_population)]
    pub gini_population: Option<GiniPopulation>,
    /// Also export interevent times per user.
    #[arg(long, global = true)]
    pub per_user_interevents: bool,
    /// synth: number of users [default: 100].
    #[arg(long, global = true)]
    pub users: Option<u64>,
    /// synth: number of events [default: 1000].
    #[arg(long, global = true)]
    pub events: Option<usize>,
    /// synth: probability that a score is positive [default: 0.9].
    #[arg(long, global = true)]
    pub positive_fraction: Option<f64>,
}

impl Flags {
    pub fn overrides(&self) -> Overrides {
        Overrides {
            input: self.input.clone(),
            out: self.out.clone(),
            tz_shift: self.tz_shift,
            thresholds: self.thresholds,
            topk: self.topk,
            null_samples: self.null_samples,
            seed: self.seed,
            mode: self.mode,
            annotations: self.annotations.clone(),
            low_degree: self.low_degree,
            gini_population: self.gini_population,
            per_user_interevents: self.per_user_interevents.then_some(true),
            users: self.users,
            events: self.events,
            positive_fraction: self.positive_fraction,
        }
    }
}
