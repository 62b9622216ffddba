mod common;

use std::collections::HashMap;

use amreval::embeddings::EmbeddingStore;
use amreval::metrics::{
    s2match, sema, sembleu, simple_jaccard, smatch, wlk, wwlk, wwlk_k3e2n, MetricConfig, MetricId, Scorer,
};
use amreval::penman::{parse_penman, AmrGraph};
use amreval::synth::{perturb, random_graph, GraphShape};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn look_over() -> (AmrGraph, AmrGraph, AmrGraph) {
    let g = |p: &str| common::load(p).remove(0).graph;
    (g("look_over/gold.amr"), g("look_over/cand1.amr"), g("look_over/cand2.amr"))
}

#[test]
fn look_over_values() {
    let (r, c1, c2) = look_over();
    assert_eq!(smatch(&c1, &r, 4, 0).0.similarity, 0.2);
    assert_eq!(smatch(&c2, &r, 4, 0).0.similarity, 0.2);
    assert!((simple_jaccard(&c1, &r).similarity - 1.0 / 7.0).abs() < 1e-12);
    assert!((sema(&c1, &r, true).similarity - 0.25).abs() < 1e-12);
    let store = EmbeddingStore::fallback();
    for c in [&c1, &c2] {
        let w = wwlk_k3e2n(c, &r, &store).similarity;
        assert!(w > 0.2, "{w}");
    }
}

#[test]
fn sembleu_examples() {
    let ab = parse_penman("(a / a :r (b / b))").unwrap();
    let ac = parse_penman("(a / a :r (c / c))").unwrap();
    let xy = parse_penman("(x / x :s (y / y))").unwrap();
    assert_eq!(sembleu(&ab, &ac, 2, false).similarity, 0.0);
    assert_eq!(sembleu(&ab, &xy, 3, false).similarity, 0.0);
    assert!((sembleu(&ab, &ab, 3, false).similarity - 1.0).abs() < 1e-12);
}

#[test]
fn graded_concepts_closed_form() {
    let table: HashMap<String, Vec<f64>> = [
        ("kitten", vec![0.8, 0.6, 0.0]),
        ("cat", vec![1.0, 0.0, 0.0]),
        ("dog", vec![0.0, 0.0, 1.0]),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v))
    .collect();
    let store = EmbeddingStore::from_table(table).unwrap();
    let a = parse_penman("(c / chase-01 :ARG0 (d / dog) :ARG1 (k / kitten) :time (n / now))").unwrap();
    let b = parse_penman("(c / chase-01 :ARG0 (d / dog) :ARG1 (k / cat) :time (n / now))").unwrap();
    // 4 instances + 3 relations + TOP, one instance graded at 0.8
    let n = 8.0;
    let got = s2match(&a, &b, &store, 0.5, 4, 0).similarity;
    assert!((got - (n - 1.0 + 0.8) / n).abs() < 1e-12);
    let strict = s2match(&a, &b, &store, 0.9, 4, 0).similarity;
    assert_eq!(strict, smatch(&a, &b, 4, 0).0.similarity);
}

#[test]
fn wwlk_closed_forms() {
    let store = EmbeddingStore::fallback();
    let a = parse_penman("(x / qwzzyx)").unwrap();
    let b = parse_penman("(y / plorbix)").unwrap();
    let d = store.dimension() as f64;
    for k in 0..4 {
        let w = (2.0 * d * store.oov_variance() * (k + 1) as f64).sqrt();
        let got = wwlk(&a, &b, &store, k);
        assert!((got.similarity - (-w).exp()).abs() < 1e-12);
    }
    let boy = parse_penman("(x / boy)").unwrap();
    let girl = parse_penman("(y / girl)").unwrap();
    let dist = store.expected_euclidean_distance("boy", "girl").value;
    let got = wwlk(&boy, &girl, &store, 2).similarity;
    assert!((got - (-dist * 3f64.sqrt()).exp()).abs() < 1e-12);
}

#[test]
fn edge_label_change_costs_more_after_rewrite() {
    let store = EmbeddingStore::fallback();
    let a = parse_penman("(w / want-01 :ARG0 (b / boy))").unwrap();
    let b = parse_penman("(w / want-01 :ARG1 (b / boy))").unwrap();
    assert!(wwlk_k3e2n(&a, &b, &store).similarity < wwlk(&a, &b, &store, 2).similarity);
}

#[test]
fn alignment_is_injective_and_consistent() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let shape = GraphShape {
        max_nodes: 6,
        ..GraphShape::default()
    };
    for _ in 0..200 {
        let r = random_graph(&mut rng, &shape);
        let c = perturb(&mut rng, &r, 0.3, &shape);
        let (score, al) = smatch(&c, &r, 4, 0);
        let mut used: Vec<usize> = al.mapping.iter().flatten().copied().collect();
        let len = used.len();
        used.sort();
        used.dedup();
        assert_eq!(used.len(), len);
        assert_eq!(common::matched_under(&c, &r, &al.mapping) as f64, al.matched);
        assert!(score.similarity <= common::exhaustive_smatch(&c, &r) + 1e-12);
    }
}

#[test]
fn hill_climbing_matches_exhaustive_search_on_small_graphs() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let shape = GraphShape {
        max_nodes: 5,
        ..GraphShape::default()
    };
    let mut misses = 0;
    for i in 0..200 {
        let r = random_graph(&mut rng, &shape);
        let c = if i % 2 == 0 {
            perturb(&mut rng, &r, 0.4, &shape)
        } else {
            random_graph(&mut rng, &shape)
        };
        let got = smatch(&c, &r, 4, 0).0.similarity;
        let want = common::exhaustive_smatch(&c, &r);
        if (got - want).abs() > 1e-12 {
            misses += 1;
        }
    }
    assert!(misses <= 2, "{misses} of 200 pairs below the exhaustive optimum");
}

fn graph_from_seed(seed: u64, oov: f64) -> AmrGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_graph(
        &mut rng,
        &GraphShape {
            max_nodes: 7,
            oov,
            ..GraphShape::default()
        },
    )
}

fn scorer() -> Scorer {
    Scorer::with_fallback_embeddings(MetricConfig::default())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn identity_and_renaming(seed in any::<u64>()) {
        let g = graph_from_seed(seed, 0.2);
        let renamed = g.rename_vars(|v| format!("{v}_r")).unwrap();
        let s = scorer();
        for m in MetricId::ALL {
            for (x, y) in [(&g, &g), (&g, &renamed), (&renamed, &g)] {
                let v = s.score(m, x, y).similarity;
                prop_assert!((v - 1.0).abs() < 1e-9, "{m}: {v}");
            }
        }
    }

    #[test]
    fn range_symmetry_and_renaming(s1 in any::<u64>(), s2 in any::<u64>()) {
        let a = graph_from_seed(s1, 0.2);
        let b = graph_from_seed(s2, 0.2);
        let b_renamed = b.rename_vars(|v| format!("q{v}")).unwrap();
        let s = scorer();
        for m in MetricId::ALL {
            let ab = s.score(m, &a, &b).similarity;
            prop_assert!((0.0..=1.0).contains(&ab));
            let renamed = s.score(m, &a, &b_renamed).similarity;
            prop_assert!((ab - renamed).abs() < 1e-12, "{m}: {ab} vs {renamed}");
            if matches!(m, MetricId::Simple | MetricId::Sema | MetricId::WlkK2 | MetricId::WwlkK2 | MetricId::WwlkK3e2n) {
                let ba = s.score(m, &b, &a).similarity;
                prop_assert!((ab - ba).abs() < 1e-9, "{m}: {ab} vs {ba}");
            }
        }
    }

    #[test]
    fn wlk_disjoint_labels_score_zero(seed in any::<u64>()) {
        let g = graph_from_seed(seed, 0.0);
        let other = g.rename_vars(|v| v.to_string()).unwrap();
        let disjoint = parse_penman("(z / unrelated-concept-xyz)").unwrap();
        prop_assert_eq!(wlk(&g, &disjoint, 2).similarity, 0.0);
        prop_assert!((wlk(&g, &other, 2).similarity - 1.0).abs() < 1e-12);
    }
}
