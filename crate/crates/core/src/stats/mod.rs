//! Corpus aggregation and agreement statistics between metrics and human
//! judgments.

mod aggregate;
mod agreement;
mod corpus;
mod judgments;
mod length;
mod significance;
mod table;

use thiserror::Error;

use crate::metrics::MetricId;

pub use aggregate::{corpus_score_macro, corpus_score_micro};
pub use agreement::{
    acceptability_delta, average_ranks, pairwise_accuracy, preference_counts, spearman, spearman_matrix,
};
pub use corpus::{Alignment, EvalCorpus, EvalItem};
pub use judgments::{parse_acceptability, parse_preferences, HumanJudgments};
pub use length::{length_buckets, sentence_length, LengthBucket, LENGTH_CAP};
pub use significance::{binomial_test, bootstrap_ci, preference_test, BinomialResult, TiesMode};
pub use table::ScoreTable;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StatsError {
    #[error("corpus is empty")]
    EmptyCorpus,
    #[error("{0} has no micro aggregate")]
    UnsupportedAggregation(MetricId),
    #[error("no items with a nonzero human preference")]
    NoSignedItems,
    #[error("no {0} parses; acceptability delta is undefined")]
    EmptyClass(&'static str),
    #[error("binomial test needs at least one trial")]
    ZeroTrials,
    #[error("wins {wins} exceed trials {n}")]
    TooManyWins { wins: u64, n: u64 },
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("duplicate item id {0:?}")]
    DuplicateId(String),
    #[error("unknown item id {0:?}")]
    UnknownId(String),
    #[error("unknown parser {0:?}")]
    UnknownParser(String),
    #[error("item {id:?} lacks a graph from parser {parser:?}")]
    MissingCandidate { id: String, parser: String },
    #[error("item {0:?} has no sentence")]
    MissingSentence(String),
    #[error("file sizes differ: {gold} gold entries vs {candidate} in {parser}")]
    CountMismatch {
        gold: usize,
        candidate: usize,
        parser: String,
    },
    #[error("line {line}: {message}")]
    Annotation { line: usize, message: String },
}

/// Derives an independent sub-seed for one named purpose from the run seed.
pub fn derive_seed(seed: u64, tag: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in tag.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    splitmix64(seed ^ splitmix64(h))
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
