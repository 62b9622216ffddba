//! AMR similarity metrics under one interface: `m(candidate, reference)`.
//!
//! Every metric returns a similarity in `[0, 1]`, higher meaning more similar.
//! Callers always pass the candidate first; only SemBLEU is directional.

mod sema;
mod sembleu;
mod simple;
mod smatch;
mod wl;
mod wwlk;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::embeddings::EmbeddingStore;
use crate::penman::AmrGraph;

pub use sema::sema;
pub use sembleu::{bleu_from_counts, sembleu, GramCounts};
pub use simple::simple_jaccard;
pub use smatch::{s2match, smatch, smatch_with, ConceptMatch, VarAlignment};
pub use wl::{wl_features, wlk, WlFeatureVector};
pub use wwlk::{wwlk, wwlk_cost_matrix, wwlk_k3e2n, wwlk_with, WwlkOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MetricId {
    #[serde(rename = "simple")]
    Simple,
    #[serde(rename = "sema")]
    Sema,
    #[serde(rename = "sembleu-k2")]
    SembleuK2,
    #[serde(rename = "sembleu-k3")]
    SembleuK3,
    #[serde(rename = "smatch")]
    Smatch,
    #[serde(rename = "s2match")]
    S2match,
    #[serde(rename = "wlk-k2")]
    WlkK2,
    #[serde(rename = "wwlk-k2")]
    WwlkK2,
    #[serde(rename = "wwlk-k3e2n")]
    WwlkK3e2n,
}

impl MetricId {
    pub const ALL: [MetricId; 9] = [
        MetricId::Simple,
        MetricId::Sema,
        MetricId::SembleuK2,
        MetricId::SembleuK3,
        MetricId::Smatch,
        MetricId::S2match,
        MetricId::WlkK2,
        MetricId::WwlkK2,
        MetricId::WwlkK3e2n,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            MetricId::Simple => "simple",
            MetricId::Sema => "sema",
            MetricId::SembleuK2 => "sembleu-k2",
            MetricId::SembleuK3 => "sembleu-k3",
            MetricId::Smatch => "smatch",
            MetricId::S2match => "s2match",
            MetricId::WlkK2 => "wlk-k2",
            MetricId::WwlkK2 => "wwlk-k2",
            MetricId::WwlkK3e2n => "wwlk-k3e2n",
        }
    }

    /// Whether pooled corpus counts exist for this metric.
    pub fn supports_micro(self) -> bool {
        matches!(
            self,
            MetricId::Sema
                | MetricId::SembleuK2
                | MetricId::SembleuK3
                | MetricId::Smatch
                | MetricId::S2match
        )
    }

    /// Whether the metric needs word vectors.
    pub fn uses_embeddings(self) -> bool {
        matches!(
            self,
            MetricId::S2match | MetricId::WwlkK2 | MetricId::WwlkK3e2n
        )
    }

    /// Parses a comma list of metric ids, or `all`.
    pub fn parse_list(s: &str) -> Result<Vec<MetricId>, UnknownMetric> {
        if s.trim() == "all" {
            return Ok(MetricId::ALL.to_vec());
        }
        let mut out = Vec::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let id: MetricId = part.parse()?;
            if !out.contains(&id) {
                out.push(id);
            }
        }
        Ok(out)
    }
}

impl fmt::Display for MetricId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown metric {0:?}")]
pub struct UnknownMetric(pub String);

impl FromStr for MetricId {
    type Err = UnknownMetric;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        MetricId::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| UnknownMetric(s.to_string()))
    }
}

/// Raw counts behind a score, used for micro aggregation and reporting.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Components {
    /// Matched (possibly graded) triple mass against triple totals.
    Triples {
        matched: f64,
        candidate: f64,
        reference: f64,
    },
    Grams(GramCounts),
    /// Optimal transport distance before mapping to a similarity.
    Distance { raw: f64 },
}

impl Components {
    pub fn precision(&self) -> Option<f64> {
        match self {
            Components::Triples {
                matched, candidate, ..
            } => Some(ratio(*matched, *candidate)),
            _ => None,
        }
    }

    pub fn recall(&self) -> Option<f64> {
        match self {
            Components::Triples {
                matched, reference, ..
            } => Some(ratio(*matched, *reference)),
            _ => None,
        }
    }
}

/// One metric's output for one (candidate, reference) pair.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricScore {
    pub metric: MetricId,
    pub similarity: f64,
    pub components: Option<Components>,
}

impl MetricScore {
    pub(crate) fn new(metric: MetricId, similarity: f64, components: Option<Components>) -> Self {
        debug_assert!(
            (0.0..=1.0 + 1e-12).contains(&similarity),
            "{metric} similarity {similarity} out of range"
        );
        MetricScore {
            metric,
            similarity: similarity.clamp(0.0, 1.0),
            components,
        }
    }

    pub(crate) fn from_triples(metric: MetricId, matched: f64, candidate: f64, reference: f64) -> Self {
        MetricScore::new(
            metric,
            f1_from_counts(matched, candidate, reference),
            Some(Components::Triples {
                matched,
                candidate,
                reference,
            }),
        )
    }
}

fn ratio(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        0.0
    } else {
        a / b
    }
}

/// `2PR / (P + R)` from counts, with `0/0 := 0`.
pub fn f1_from_counts(matched: f64, candidate: f64, reference: f64) -> f64 {
    let p = ratio(matched, candidate);
    let r = ratio(matched, reference);
    if p + r == 0.0 {
        0.0
    } else {
        2.0 * p * r / (p + r)
    }
}

/// Tunable settings shared by all metrics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricConfig {
    /// Hill-climbing starts for Smatch/S2match (first one greedy).
    pub restarts: usize,
    pub seed: u64,
    /// Minimum cosine for a graded S2match concept match.
    pub s2match_threshold: f64,
    /// Include unary concept triples in SemA.
    pub sema_unary: bool,
    pub sembleu_smoothing: bool,
}

impl Default for MetricConfig {
    fn default() -> Self {
        MetricConfig {
            restarts: 4,
            seed: 0,
            s2match_threshold: 0.5,
            sema_unary: true,
            sembleu_smoothing: false,
        }
    }
}

/// Configured, immutable metric evaluator. Cheap to clone and share.
#[derive(Debug, Clone)]
pub struct Scorer {
    config: MetricConfig,
    embeddings: Arc<EmbeddingStore>,
}

impl Scorer {
    pub fn new(config: MetricConfig, embeddings: Arc<EmbeddingStore>) -> Self {
        Scorer { config, embeddings }
    }

    /// Default settings over the built-in hashed vectors.
    pub fn with_fallback_embeddings(config: MetricConfig) -> Self {
        Scorer::new(config, Arc::new(EmbeddingStore::fallback()))
    }

    pub fn config(&self) -> &MetricConfig {
        &self.config
    }

    pub fn embeddings(&self) -> &EmbeddingStore {
        &self.embeddings
    }

    pub fn score(&self, metric: MetricId, candidate: &AmrGraph, reference: &AmrGraph) -> MetricScore {
        let c = &self.config;
        match metric {
            MetricId::Simple => simple_jaccard(candidate, reference),
            MetricId::Sema => sema(candidate, reference, c.sema_unary),
            MetricId::SembleuK2 => sembleu(candidate, reference, 2, c.sembleu_smoothing),
            MetricId::SembleuK3 => sembleu(candidate, reference, 3, c.sembleu_smoothing),
            MetricId::Smatch => smatch(candidate, reference, c.restarts, c.seed).0,
            MetricId::S2match => s2match(
                candidate,
                reference,
                &self.embeddings,
                c.s2match_threshold,
                c.restarts,
                c.seed,
            ),
            MetricId::WlkK2 => wlk(candidate, reference, 2),
            MetricId::WwlkK2 => wwlk(candidate, reference, &self.embeddings, 2),
            MetricId::WwlkK3e2n => wwlk_k3e2n(candidate, reference, &self.embeddings),
        }
    }
}
