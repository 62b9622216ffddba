use super::StatsError;
use crate::metrics::{bleu_from_counts, f1_from_counts, Components, GramCounts, MetricScore};

/// Mean of per-item values.
pub fn corpus_score_macro(values: &[f64]) -> Result<f64, StatsError> {
    if values.is_empty() {
        return Err(StatsError::EmptyCorpus);
    }
    Ok(values.iter().sum::<f64>() / values.len() as f64)
}

/// One F1 (or BLEU) over counts pooled across the corpus.
///
/// All scores must come from the same metric.
pub fn corpus_score_micro(scores: &[MetricScore], sembleu_smoothing: bool) -> Result<f64, StatsError> {
    let first = scores.first().ok_or(StatsError::EmptyCorpus)?;
    if !first.metric.supports_micro() {
        return Err(StatsError::UnsupportedAggregation(first.metric));
    }
    match &first.components {
        Some(Components::Triples { .. }) => {
            let (mut m, mut c, mut r) = (0.0, 0.0, 0.0);
            for s in scores {
                match &s.components {
                    Some(Components::Triples {
                        matched,
                        candidate,
                        reference,
                    }) => {
                        m += matched;
                        c += candidate;
                        r += reference;
                    }
                    _ => return Err(StatsError::UnsupportedAggregation(s.metric)),
                }
            }
            Ok(f1_from_counts(m, c, r))
        }
        Some(Components::Grams(g)) => {
            let mut pooled = GramCounts::zeros(g.matched.len());
            for s in scores {
                match &s.components {
                    Some(Components::Grams(g)) => pooled.accumulate(g),
                    _ => return Err(StatsError::UnsupportedAggregation(s.metric)),
                }
            }
            Ok(bleu_from_counts(&pooled, sembleu_smoothing))
        }
        _ => Err(StatsError::UnsupportedAggregation(first.metric)),
    }
}
