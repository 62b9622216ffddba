//! Seeded generators for AMR-like graphs and parser-like corpora.
//!
//! Used by tests, property checks and benchmarks; not a model of real AMR
//! statistics.

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::penman::{AmrEntry, AmrGraph, GraphBuilder};

pub const CONCEPTS: &[&str] = &[
    "want-01", "go-02", "boy", "girl", "person", "city", "look-01", "see-01", "say-01", "thing",
    "and", "country", "name", "good", "work-01", "new", "possible-01", "house", "dog", "cat",
];

/// Labels absent from the fallback embedding vocabulary.
pub const OOV_CONCEPTS: &[&str] = &["zorblat", "quimbly-01", "frangle", "wuzzock", "plinth-03"];

pub const ROLES: &[&str] = &[
    "ARG0", "ARG1", "ARG2", "mod", "location", "time", "op1", "op2", "manner", "poss",
];

const ATTRIBUTE_ROLES: &[&str] = &["polarity", "quant", "op1", "mode"];
const ATTRIBUTE_VALUES: &[&str] = &["-", "1", "2", "3", "\"Paris\"", "imperative"];

const WORDS: &[&str] = &[
    "the", "boy", "wants", "to", "go", "a", "girl", "sees", "city", "and", "dog", "new", "house",
];

/// Shape parameters for [`random_graph`].
#[derive(Debug, Clone)]
pub struct GraphShape {
    pub min_nodes: usize,
    pub max_nodes: usize,
    /// Chance of one extra (reentrant) edge per node.
    pub reentrancy: f64,
    /// Chance of an attribute per node.
    pub attribute: f64,
    /// Chance that a concept is drawn from [`OOV_CONCEPTS`].
    pub oov: f64,
}

impl Default for GraphShape {
    fn default() -> Self {
        GraphShape {
            min_nodes: 1,
            max_nodes: 8,
            reentrancy: 0.15,
            attribute: 0.2,
            oov: 0.0,
        }
    }
}

fn concept<R: Rng>(rng: &mut R, shape: &GraphShape) -> &'static str {
    if rng.random_bool(shape.oov) {
        OOV_CONCEPTS.choose(rng).unwrap()
    } else {
        CONCEPTS.choose(rng).unwrap()
    }
}

/// Random connected rooted graph: a random tree over the nodes plus optional
/// extra edges and attributes.
pub fn random_graph<R: Rng>(rng: &mut R, shape: &GraphShape) -> AmrGraph {
    let n = rng.random_range(shape.min_nodes.max(1)..=shape.max_nodes.max(shape.min_nodes).max(1));
    let mut b = GraphBuilder::new();
    let vars: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    for v in &vars {
        b.node(v, concept(rng, shape)).expect("fresh variable");
    }
    for i in 1..n {
        let parent = rng.random_range(0..i);
        let role = ROLES.choose(rng).unwrap();
        b.edge(&vars[parent], role, &vars[i]).expect("known variables");
    }
    for i in 0..n {
        if n > 1 && rng.random_bool(shape.reentrancy) {
            let j = rng.random_range(0..n);
            let role = ROLES.choose(rng).unwrap();
            b.edge(&vars[i], role, &vars[j]).expect("known variables");
        }
        if rng.random_bool(shape.attribute) {
            let role = ATTRIBUTE_ROLES.choose(rng).unwrap();
            let value = ATTRIBUTE_VALUES.choose(rng).unwrap().trim_matches('"');
            b.attribute(&vars[i], role, value).expect("known variable");
        }
    }
    b.build().expect("tree edges keep the graph connected")
}

/// Copy of `g` with each concept, role and attribute value replaced with
/// probability `rate`, and variables renamed.
pub fn perturb<R: Rng>(rng: &mut R, g: &AmrGraph, rate: f64, shape: &GraphShape) -> AmrGraph {
    let mut b = GraphBuilder::new();
    let vars: Vec<String> = (0..g.node_count()).map(|i| format!("p{i}")).collect();
    for (i, v) in vars.iter().enumerate() {
        let c = if rng.random_bool(rate) {
            concept(rng, shape)
        } else {
            g.concept(i)
        };
        b.node(v, c).expect("fresh variable");
    }
    for e in g.edges() {
        let role = if rng.random_bool(rate) {
            ROLES.choose(rng).unwrap()
        } else {
            e.role.as_str()
        };
        b.edge(&vars[e.source], role, &vars[e.target]).expect("known variables");
    }
    for a in g.attributes() {
        if rng.random_bool(rate) {
            continue;
        }
        b.attribute(&vars[a.source], &a.role, &a.value).expect("known variable");
    }
    b.build().expect("same skeleton as the input")
}

/// One synthetic item: gold plus two parser outputs of differing quality.
#[derive(Debug, Clone)]
pub struct SynthItem {
    pub gold: AmrEntry,
    pub a: AmrEntry,
    pub b: AmrEntry,
}

fn entry(id: &str, sentence: &str, graph: AmrGraph) -> AmrEntry {
    let mut e = AmrEntry::new(graph);
    e.id = Some(id.to_string());
    e.sentence = Some(sentence.to_string());
    e.metadata = vec![("id".into(), id.into()), ("snt".into(), sentence.into())];
    e
}

/// `n` items with ids `s1..sn`; parser A perturbs at `rate_a`, B at `rate_b`.
pub fn synthetic_corpus(seed: u64, n: usize, shape: &GraphShape, rate_a: f64, rate_b: f64) -> Vec<SynthItem> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (1..=n)
        .map(|i| {
            let id = format!("s{i}");
            let gold = random_graph(&mut rng, shape);
            let len = gold.node_count() * 2 + rng.random_range(0..4);
            let sentence: Vec<&str> = (0..len).map(|_| *WORDS.choose(&mut rng).unwrap()).collect();
            let sentence = sentence.join(" ");
            let a = perturb(&mut rng, &gold, rate_a, shape);
            let b = perturb(&mut rng, &gold, rate_b, shape);
            SynthItem {
                gold: entry(&id, &sentence, gold),
                a: entry(&id, &sentence, a),
                b: entry(&id, &sentence, b),
            }
        })
        .collect()
}
