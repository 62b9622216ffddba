use std::collections::HashMap;

use super::{Components, MetricId, MetricScore};
use crate::embeddings::{squared_distance, EmbeddingStore};
use crate::penman::{edge_to_node_transform, AmrGraph, LabeledView};
use crate::transport::wasserstein_from_cost;

/// Settings for the Wasserstein WL kernel.
#[derive(Debug, Clone, PartialEq)]
pub struct WwlkOptions {
    /// Number of contextualization steps; nodes carry `iterations + 1` blocks.
    pub iterations: usize,
    /// Rewrite edges as nodes first (edge labels then carry embedding mass).
    pub edge_to_node: bool,
    /// Overrides every edge weight when set.
    pub uniform_weight: Option<f64>,
}

impl Default for WwlkOptions {
    fn default() -> Self {
        WwlkOptions {
            iterations: 2,
            edge_to_node: false,
            uniform_weight: None,
        }
    }
}

/// A node representation split into a part spanned by known vectors and
/// coefficients on the random vectors of OOV keys.
#[derive(Clone)]
struct Rep {
    known: Vec<f64>,
    oov: Vec<f64>,
}

impl Rep {
    fn zeros(dim: usize, n_oov: usize) -> Self {
        Rep {
            known: vec![0.0; dim],
            oov: vec![0.0; n_oov],
        }
    }

    fn add_scaled(&mut self, other: &Rep, s: f64) {
        for (a, b) in self.known.iter_mut().zip(&other.known) {
            *a += s * b;
        }
        for (a, b) in self.oov.iter_mut().zip(&other.oov) {
            *a += s * b;
        }
    }
}

/// Per-node blocks `[h⁰, …, hᵏ]` for one graph.
fn contextualize(
    view: &LabeledView,
    store: &EmbeddingStore,
    oov_index: &HashMap<String, usize>,
    iterations: usize,
) -> Vec<Vec<Rep>> {
    let dim = store.dimension();
    let n_oov = oov_index.len();
    let mut h: Vec<Rep> = view
        .labels
        .iter()
        .map(|label| {
            let mut r = Rep::zeros(dim, n_oov);
            match store.lookup(label) {
                Some(v) => r.known.copy_from_slice(v),
                None => r.oov[oov_index[&store.key(label)]] = 1.0,
            }
            r
        })
        .collect();
    let neighbors = view.neighbors();
    let mut blocks: Vec<Vec<Rep>> = h.iter().map(|r| vec![r.clone()]).collect();
    for _ in 0..iterations {
        let next: Vec<Rep> = (0..view.len())
            .map(|v| {
                if neighbors[v].is_empty() {
                    return h[v].clone();
                }
                let mut agg = Rep::zeros(dim, n_oov);
                let scale = 0.5 / neighbors[v].len() as f64;
                for &(u, arc) in &neighbors[v] {
                    agg.add_scaled(&h[u], scale * view.arcs[arc].weight);
                }
                agg.add_scaled(&h[v], 0.5);
                agg
            })
            .collect();
        for (b, r) in blocks.iter_mut().zip(&next) {
            b.push(r.clone());
        }
        h = next;
    }
    blocks
}

fn prepared_views(candidate: &AmrGraph, reference: &AmrGraph, opts: &WwlkOptions) -> [LabeledView; 2] {
    [candidate, reference].map(|g| {
        let g = if opts.edge_to_node {
            edge_to_node_transform(g)
        } else {
            g.clone()
        };
        let g = match opts.uniform_weight {
            Some(w) => g.with_uniform_weights(w),
            None => g,
        };
        g.labeled_view()
    })
}

/// Expected Euclidean node distances between the contextualized node
/// clouds of the two graphs (rows: candidate nodes).
pub fn wwlk_cost_matrix(
    candidate: &AmrGraph,
    reference: &AmrGraph,
    store: &EmbeddingStore,
    opts: &WwlkOptions,
) -> Vec<Vec<f64>> {
    let views = prepared_views(candidate, reference, opts);
    let mut oov_index: HashMap<String, usize> = HashMap::new();
    for view in &views {
        for label in &view.labels {
            if store.lookup(label).is_none() {
                let next = oov_index.len();
                oov_index.entry(store.key(label)).or_insert(next);
            }
        }
    }
    let a = contextualize(&views[0], store, &oov_index, opts.iterations);
    let b = contextualize(&views[1], store, &oov_index, opts.iterations);
    let dsigma = store.dimension() as f64 * store.oov_variance();
    a.iter()
        .map(|ra| {
            b.iter()
                .map(|rb| {
                    ra.iter()
                        .zip(rb)
                        .map(|(x, y)| {
                            squared_distance(&x.known, &y.known)
                                + dsigma * squared_distance(&x.oov, &y.oov)
                        })
                        .sum::<f64>()
                        .sqrt()
                })
                .collect()
        })
        .collect()
}

/// Wasserstein distance between node clouds, mapped to `exp(-W)`.
pub fn wwlk_with(
    candidate: &AmrGraph,
    reference: &AmrGraph,
    store: &EmbeddingStore,
    opts: &WwlkOptions,
    metric: MetricId,
) -> MetricScore {
    let cost = wwlk_cost_matrix(candidate, reference, store, opts);
    let raw = wasserstein_from_cost(cost)
        .unwrap_or_else(|e| panic!("transport on valid graphs failed: {e}"));
    let raw = raw.max(0.0);
    MetricScore::new(metric, (-raw).exp(), Some(Components::Distance { raw }))
}

/// Plain WWLK with `k` contextualization steps and the graphs' edge weights.
pub fn wwlk(candidate: &AmrGraph, reference: &AmrGraph, store: &EmbeddingStore, k: usize) -> MetricScore {
    let opts = WwlkOptions {
        iterations: k,
        ..WwlkOptions::default()
    };
    wwlk_with(candidate, reference, store, &opts, MetricId::WwlkK2)
}

/// WWLK over edge-to-node rewritten graphs, `k = 3`, all weights 1.
pub fn wwlk_k3e2n(candidate: &AmrGraph, reference: &AmrGraph, store: &EmbeddingStore) -> MetricScore {
    let opts = WwlkOptions {
        iterations: 3,
        edge_to_node: true,
        uniform_weight: Some(1.0),
    };
    wwlk_with(candidate, reference, store, &opts, MetricId::WwlkK3e2n)
}
