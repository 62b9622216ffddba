use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use super::{MetricId, MetricScore};
use crate::penman::{AmrGraph, LabeledView};

/// Weisfeiler-Leman label counts per refinement iteration.
///
/// Iteration 0 keys are raw node labels; later keys are compressed
/// signatures built from the previous iteration's label ids.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct WlFeatureVector {
    pub counts: BTreeMap<(usize, String), usize>,
}

impl WlFeatureVector {
    pub fn total_at(&self, iteration: usize) -> usize {
        self.counts
            .iter()
            .filter(|((i, _), _)| *i == iteration)
            .map(|(_, c)| c)
            .sum()
    }

    fn dot(&self, other: &WlFeatureVector) -> f64 {
        self.counts
            .iter()
            .filter_map(|(k, &a)| other.counts.get(k).map(|&b| (a * b) as f64))
            .sum()
    }

    fn norm(&self) -> f64 {
        self.counts
            .values()
            .map(|&c| (c * c) as f64)
            .sum::<f64>()
            .sqrt()
    }
}

/// Refines labels of several graphs jointly for `k` iterations, so that
/// equal signatures get equal ids across graphs.
pub fn wl_features(graphs: &[&AmrGraph], k: usize) -> Vec<WlFeatureVector> {
    let views: Vec<LabeledView> = graphs.iter().map(|g| g.labeled_view()).collect();
    let neighbors: Vec<Vec<Vec<(usize, usize)>>> = views.iter().map(|v| v.neighbors()).collect();
    let mut out = vec![WlFeatureVector::default(); views.len()];
    let mut current: Vec<Vec<String>> = views.iter().map(|v| v.labels.clone()).collect();
    for iteration in 0..=k {
        for (g, labels) in current.iter().enumerate() {
            for l in labels {
                *out[g].counts.entry((iteration, l.clone())).or_insert(0) += 1;
            }
        }
        if iteration == k {
            break;
        }
        let mut ids: HashMap<&str, usize> = HashMap::new();
        for labels in &current {
            for l in labels {
                let next = ids.len();
                ids.entry(l.as_str()).or_insert(next);
            }
        }
        let mut next_labels = Vec::with_capacity(views.len());
        for (g, view) in views.iter().enumerate() {
            let refined: Vec<String> = (0..view.len())
                .map(|v| {
                    let mut parts: Vec<(&str, usize)> = neighbors[g][v]
                        .iter()
                        .map(|&(u, arc)| (view.arcs[arc].label.as_str(), ids[current[g][u].as_str()]))
                        .collect();
                    parts.sort_unstable();
                    let mut sig = ids[current[g][v].as_str()].to_string();
                    sig.push('|');
                    for (label, id) in parts {
                        sig.push_str(label);
                        sig.push(':');
                        sig.push_str(&id.to_string());
                        sig.push(',');
                    }
                    sig
                })
                .collect();
            next_labels.push(refined);
        }
        current = next_labels;
    }
    out
}

/// Cosine similarity of WL feature counts over iterations `0..=k`.
pub fn wlk(candidate: &AmrGraph, reference: &AmrGraph, k: usize) -> MetricScore {
    let f = wl_features(&[candidate, reference], k);
    let denom = f[0].norm() * f[1].norm();
    let sim = if denom == 0.0 { 0.0 } else { f[0].dot(&f[1]) / denom };
    MetricScore::new(MetricId::WlkK2, sim.min(1.0), None)
}
