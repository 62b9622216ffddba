use std::collections::HashMap;

use serde::Serialize;

use super::{Components, MetricId, MetricScore};
use crate::penman::transform::kgrams_of_view;
use crate::penman::{AmrGraph, KGram};

/// Numerator added to zero match counts when smoothing is on.
const SMOOTHING_EPSILON: f64 = 0.1;

/// Per-order clipped matches and totals, plus total gram lengths.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GramCounts {
    pub matched: Vec<f64>,
    pub candidate: Vec<f64>,
    pub reference: Vec<f64>,
    pub candidate_len: f64,
    pub reference_len: f64,
}

impl GramCounts {
    pub fn zeros(orders: usize) -> Self {
        GramCounts {
            matched: vec![0.0; orders],
            candidate: vec![0.0; orders],
            reference: vec![0.0; orders],
            candidate_len: 0.0,
            reference_len: 0.0,
        }
    }

    /// Adds `other` into `self` (corpus pooling).
    pub fn accumulate(&mut self, other: &GramCounts) {
        assert_eq!(self.matched.len(), other.matched.len(), "gram orders differ");
        for n in 0..self.matched.len() {
            self.matched[n] += other.matched[n];
            self.candidate[n] += other.candidate[n];
            self.reference[n] += other.reference[n];
        }
        self.candidate_len += other.candidate_len;
        self.reference_len += other.reference_len;
    }
}

fn bag(grams: Vec<KGram>) -> HashMap<KGram, usize> {
    let mut out = HashMap::new();
    for g in grams {
        *out.entry(g).or_insert(0) += 1;
    }
    out
}

pub(crate) fn gram_counts(candidate: &AmrGraph, reference: &AmrGraph, k: usize) -> GramCounts {
    let cv = candidate.labeled_view();
    let rv = reference.labeled_view();
    let mut counts = GramCounts::zeros(k);
    for n in 1..=k {
        let cb = bag(kgrams_of_view(&cv, n));
        let rb = bag(kgrams_of_view(&rv, n));
        counts.matched[n - 1] = cb
            .iter()
            .map(|(g, &c)| c.min(rb.get(g).copied().unwrap_or(0)))
            .sum::<usize>() as f64;
        counts.candidate[n - 1] = cb.values().sum::<usize>() as f64;
        counts.reference[n - 1] = rb.values().sum::<usize>() as f64;
    }
    counts.candidate_len = counts.candidate.iter().sum();
    counts.reference_len = counts.reference.iter().sum();
    counts
}

/// BLEU over gram counts: uniform-weight geometric mean of clipped
/// precisions times `exp(1 - r/c)` when `c < r`.
///
/// An order with no candidate grams has precision 1 if the reference has
/// none either, else 0.
pub fn bleu_from_counts(counts: &GramCounts, smoothing: bool) -> f64 {
    let k = counts.matched.len();
    if k == 0 || counts.candidate_len == 0.0 {
        return if counts.reference_len == 0.0 && k > 0 { 1.0 } else { 0.0 };
    }
    let mut log_sum = 0.0;
    for n in 0..k {
        let (m, c, r) = (counts.matched[n], counts.candidate[n], counts.reference[n]);
        let p = if c == 0.0 {
            if r == 0.0 {
                1.0
            } else {
                0.0
            }
        } else if m == 0.0 && smoothing {
            SMOOTHING_EPSILON / c
        } else {
            m / c
        };
        if p == 0.0 {
            return 0.0;
        }
        log_sum += p.ln() / k as f64;
    }
    let bp = if counts.candidate_len < counts.reference_len {
        (1.0 - counts.reference_len / counts.candidate_len).exp()
    } else {
        1.0
    };
    (bp * log_sum.exp()).clamp(0.0, 1.0)
}

/// SemBLEU with orders `1..=k` on bags of graph k-grams.
pub fn sembleu(candidate: &AmrGraph, reference: &AmrGraph, k: usize, smoothing: bool) -> MetricScore {
    let id = match k {
        2 => MetricId::SembleuK2,
        3 => MetricId::SembleuK3,
        _ => panic!("SemBLEU is defined for k = 2 or 3, got {k}"),
    };
    let counts = gram_counts(candidate, reference, k);
    let sim = bleu_from_counts(&counts, smoothing);
    MetricScore::new(id, sim, Some(Components::Grams(counts)))
}
