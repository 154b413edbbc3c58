//! Analytics for signed peer-rating logs modelled as a two-layer temporal
//! network: a rewarding layer of positive ratings and a punitive layer of
//! negative ones.
//!
//! The [`model`] module holds the event log and per-user metrics; the other
//! modules compute structural, categorical, temporal and dynamical measures
//! over it. Every analysis is a pure function of an immutable [`EventLog`].

pub mod category;
pub mod dynamics;
pub mod error;
pub mod export;
pub mod graph;
pub mod ingest;
pub mod model;
pub mod nullmodel;
pub mod ranking;
pub mod statics;
pub mod stats;
pub mod synth;
pub mod temporal;

pub use error::{Error, Result};
pub use model::{
    gettrust, node_metrics, split_layers, Cutoff, EventLog, Layer, LayerView, MetricsMap, NodeMetrics, RatingEvent,
    Score, Timestamp, UserId,
};
