use std::collections::HashMap;

use super::{MetricId, MetricScore};
use crate::penman::AmrGraph;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum FreeTriple<'a> {
    Unary(&'a str),
    Binary(&'a str, &'a str, &'a str),
}

/// Triples with every variable replaced by its concept.
fn variable_free(g: &AmrGraph, unary: bool) -> HashMap<FreeTriple<'_>, usize> {
    let mut bag = HashMap::new();
    if unary {
        for n in g.nodes() {
            *bag.entry(FreeTriple::Unary(&n.concept)).or_insert(0) += 1;
        }
    }
    for e in g.edges() {
        let t = FreeTriple::Binary(g.concept(e.source), &e.role, g.concept(e.target));
        *bag.entry(t).or_insert(0) += 1;
    }
    for a in g.attributes() {
        let t = FreeTriple::Binary(g.concept(a.source), &a.role, &a.value);
        *bag.entry(t).or_insert(0) += 1;
    }
    bag
}

/// Alignment-free triple F1 over variable-free triples.
///
/// With `unary` set, each node also contributes a one-element concept triple.
pub fn sema(candidate: &AmrGraph, reference: &AmrGraph, unary: bool) -> MetricScore {
    let c = variable_free(candidate, unary);
    let r = variable_free(reference, unary);
    let matched: usize = c
        .iter()
        .map(|(t, &n)| n.min(r.get(t).copied().unwrap_or(0)))
        .sum();
    let total = |b: &HashMap<FreeTriple<'_>, usize>| b.values().sum::<usize>() as f64;
    MetricScore::from_triples(MetricId::Sema, matched as f64, total(&c), total(&r))
}
