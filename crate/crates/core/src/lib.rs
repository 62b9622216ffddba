//! Similarity metrics for AMR graphs and the statistics used to meta-evaluate
//! them against human judgments.

pub mod embeddings;
pub mod metrics;
pub mod penman;
pub mod report;
pub mod stats;
pub mod synth;
pub mod transport;

pub use penman::{parse_penman, read_corpus, serialize_penman, AmrEntry, AmrGraph, Triple};
pub use metrics::{MetricConfig, MetricId, MetricScore, Scorer};
