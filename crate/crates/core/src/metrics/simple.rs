use std::collections::HashMap;

use super::{MetricId, MetricScore};
use crate::penman::AmrGraph;

/// Bag of concept, constant, and relation labels.
fn label_bag(g: &AmrGraph) -> HashMap<&str, usize> {
    let mut bag = HashMap::new();
    for n in g.nodes() {
        *bag.entry(n.concept.as_str()).or_insert(0) += 1;
    }
    for e in g.edges() {
        *bag.entry(e.role.as_str()).or_insert(0) += 1;
    }
    for a in g.attributes() {
        *bag.entry(a.role.as_str()).or_insert(0) += 1;
        *bag.entry(a.value.as_str()).or_insert(0) += 1;
    }
    bag
}

/// Multiset Jaccard coefficient of the two label bags.
pub fn simple_jaccard(candidate: &AmrGraph, reference: &AmrGraph) -> MetricScore {
    let a = label_bag(candidate);
    let b = label_bag(reference);
    let mut inter = 0;
    let mut union = 0;
    for (k, &ca) in &a {
        let cb = b.get(k).copied().unwrap_or(0);
        inter += ca.min(cb);
        union += ca.max(cb);
    }
    union += b
        .iter()
        .filter(|(k, _)| !a.contains_key(*k))
        .map(|(_, &c)| c)
        .sum::<usize>();
    let sim = if union == 0 {
        0.0
    } else {
        inter as f64 / union as f64
    };
    MetricScore::new(MetricId::Simple, sim, None)
}
