use std::collections::{BTreeMap, HashSet};
use std::fmt;

use serde::Serialize;

use super::graph::{AmrGraph, Edge, LabeledView, Node};

/// Role of the synthetic root triple.
pub const TOP_ROLE: &str = "TOP";

/// Label on the unlabeled edges produced by [`edge_to_node_transform`].
pub const E2N_EDGE_LABEL: &str = "e2n";

/// Smatch-style atomic unit of a graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Triple {
    Instance {
        var: String,
        concept: String,
    },
    Attribute {
        role: String,
        var: String,
        value: String,
    },
    Relation {
        role: String,
        source: String,
        target: String,
    },
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Triple::Instance { var, concept } => write!(f, "instance({var}, {concept})"),
            Triple::Attribute { role, var, value } => write!(f, "{role}({var}, {value})"),
            Triple::Relation {
                role,
                source,
                target,
            } => write!(f, "{role}({source}, {target})"),
        }
    }
}

/// All triples of `g`: one instance triple per node, one relation triple per
/// edge, one attribute triple per attribute, plus `TOP(root, root-concept)`.
///
/// Returned sorted. Duplicated edges are kept, so this is a multiset.
pub fn to_triples(g: &AmrGraph) -> Vec<Triple> {
    let mut out = Vec::with_capacity(g.node_count() + g.edges().len() + g.attributes().len() + 1);
    for n in g.nodes() {
        out.push(Triple::Instance {
            var: n.var.clone(),
            concept: n.concept.clone(),
        });
    }
    for e in g.edges() {
        out.push(Triple::Relation {
            role: e.role.clone(),
            source: g.var(e.source).to_string(),
            target: g.var(e.target).to_string(),
        });
    }
    for a in g.attributes() {
        out.push(Triple::Attribute {
            role: a.role.clone(),
            var: g.var(a.source).to_string(),
            value: a.value.clone(),
        });
    }
    out.push(Triple::Attribute {
        role: TOP_ROLE.to_string(),
        var: g.var(g.root()).to_string(),
        value: g.concept(g.root()).to_string(),
    });
    out.sort();
    out
}

/// Levi transform: every labeled edge `(x, r, z)` becomes a fresh node `y`
/// with concept `r` and two edges `x -> y -> z` labeled [`E2N_EDGE_LABEL`].
///
/// Attribute constants are first turned into leaf nodes, so the result has no
/// attributes. Counted over the labeled view, the node count grows by
/// `|edges| + |attributes|` and the edge count becomes twice that. All weights
/// are 1.0. Fresh variable names come from a counter.
pub fn edge_to_node_transform(g: &AmrGraph) -> AmrGraph {
    let mut taken: HashSet<String> = g.nodes().iter().map(|n| n.var.clone()).collect();
    let mut counter = 0usize;
    let mut fresh = |prefix: &str| loop {
        let name = format!("{prefix}{counter}");
        counter += 1;
        if taken.insert(name.clone()) {
            return name;
        }
    };

    let mut nodes: Vec<Node> = g.nodes().to_vec();
    let mut edges = Vec::with_capacity(2 * (g.edges().len() + g.attributes().len()));
    let mut relabel = |nodes: &mut Vec<Node>, source: usize, role: &str, target: usize| {
        let y = nodes.len();
        nodes.push(Node {
            var: fresh("e2n"),
            concept: role.to_string(),
        });
        edges.push(Edge {
            source,
            role: E2N_EDGE_LABEL.to_string(),
            target: y,
            weight: 1.0,
        });
        edges.push(Edge {
            source: y,
            role: E2N_EDGE_LABEL.to_string(),
            target,
            weight: 1.0,
        });
    };
    for e in g.edges() {
        relabel(&mut nodes, e.source, &e.role, e.target);
    }
    for a in g.attributes() {
        let z = nodes.len();
        let concept = if a.value.is_empty() {
            "\"\"".to_string()
        } else {
            a.value.clone()
        };
        nodes.push(Node {
            var: format!("const{z}"),
            concept,
        });
        relabel(&mut nodes, a.source, &a.role, z);
    }
    // Constant node names are positional and may collide with existing vars.
    let mut seen: HashSet<String> = HashSet::new();
    for n in nodes.iter_mut() {
        while !seen.insert(n.var.clone()) {
            n.var.push('_');
        }
    }
    AmrGraph::new(g.root(), nodes, edges, Vec::new())
        .expect("edge-to-node transform preserves graph invariants")
}

/// Alternating node/edge label sequence of a k-node path.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct KGram(pub Vec<String>);

impl KGram {
    /// Number of nodes in the path.
    pub fn order(&self) -> usize {
        self.0.len().div_ceil(2)
    }
}

impl fmt::Display for KGram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.join(" "))
    }
}

/// Every directed path of `k` nodes following outgoing arcs of the labeled
/// view, started from every node, visiting no node twice. Sorted.
pub fn extract_kgrams(g: &AmrGraph, k: usize) -> Vec<KGram> {
    kgrams_of_view(&g.labeled_view(), k)
}

pub(crate) fn kgrams_of_view(view: &LabeledView, k: usize) -> Vec<KGram> {
    let mut out = Vec::new();
    if k == 0 {
        return out;
    }
    let outgoing = view.outgoing();
    let mut path_nodes = Vec::with_capacity(k);
    let mut tokens = Vec::with_capacity(2 * k - 1);
    for start in 0..view.len() {
        path_nodes.push(start);
        tokens.push(view.labels[start].clone());
        walk(view, &outgoing, k, &mut path_nodes, &mut tokens, &mut out);
        path_nodes.pop();
        tokens.pop();
    }
    out.sort();
    out
}

fn walk(
    view: &LabeledView,
    outgoing: &[Vec<usize>],
    k: usize,
    path_nodes: &mut Vec<usize>,
    tokens: &mut Vec<String>,
    out: &mut Vec<KGram>,
) {
    if path_nodes.len() == k {
        out.push(KGram(tokens.clone()));
        return;
    }
    let here = *path_nodes.last().expect("path is never empty");
    for &ai in &outgoing[here] {
        let arc = &view.arcs[ai];
        if path_nodes.contains(&arc.target) {
            continue;
        }
        path_nodes.push(arc.target);
        tokens.push(arc.label.clone());
        tokens.push(view.labels[arc.target].clone());
        walk(view, outgoing, k, path_nodes, tokens, out);
        tokens.pop();
        tokens.pop();
        path_nodes.pop();
    }
}

/// [`extract_kgrams`] as a count map.
pub fn kgram_bag(g: &AmrGraph, k: usize) -> BTreeMap<KGram, usize> {
    let mut bag = BTreeMap::new();
    for gram in extract_kgrams(g, k) {
        *bag.entry(gram).or_insert(0) += 1;
    }
    bag
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::penman::parse_penman;

    fn look_over_ref() -> AmrGraph {
        parse_penman("(l / look-over-06 :ARG1 (f / flag))").unwrap()
    }

    #[test]
    fn look_over_triples() {
        let t = to_triples(&look_over_ref());
        let shown: Vec<String> = t.iter().map(|t| t.to_string()).collect();
        assert_eq!(
            shown,
            vec![
                "instance(f, flag)",
                "instance(l, look-over-06)",
                "TOP(l, look-over-06)",
                "ARG1(l, f)",
            ]
        );
    }

    #[test]
    fn content_triples_of_a_two_node_sentence() {
        // "The bird sings": instance, instance, ARG0 -> three content triples.
        let g = parse_penman("(s / sing-01 :ARG0 (b / bird))").unwrap();
        let content = to_triples(&g)
            .into_iter()
            .filter(|t| !matches!(t, Triple::Attribute { role, .. } if role == TOP_ROLE))
            .count();
        assert_eq!(content, 3);
        let single = parse_penman("(a / a-concept)").unwrap();
        assert_eq!(to_triples(&single).len(), 2);
    }

    #[test]
    fn e2n_look_over() {
        let t = edge_to_node_transform(&look_over_ref());
        assert_eq!(t.node_count(), 3);
        assert_eq!(t.edges().len(), 2);
        assert_eq!(t.concept(2), "ARG1");
        assert!(t.edges().iter().all(|e| e.role == E2N_EDGE_LABEL));
    }

    #[test]
    fn e2n_counts_with_attributes() {
        let g = parse_penman(r#"(s / sing-01 :ARG0 (p / person :name (n / name :op1 "Jon")) :polarity -)"#)
            .unwrap();
        let (e, a) = (g.edges().len(), g.attributes().len());
        let before = g.labeled_view().len();
        let t = edge_to_node_transform(&g);
        assert_eq!(t.node_count(), before + e + a);
        assert_eq!(t.edges().len(), 2 * (e + a));
        assert!(t.attributes().is_empty());
        // deterministic
        assert_eq!(t, edge_to_node_transform(&g));
    }

    #[test]
    fn e2n_edge_free_graph_is_unchanged() {
        let g = parse_penman("(a / a-concept)").unwrap();
        assert_eq!(edge_to_node_transform(&g), g);
    }

    #[test]
    fn e2n_avoids_existing_names() {
        let g = parse_penman("(e2n0 / x :ARG0 (const1 / y :mod 5))").unwrap();
        let t = edge_to_node_transform(&g);
        let names: HashSet<_> = t.nodes().iter().map(|n| n.var.as_str()).collect();
        assert_eq!(names.len(), t.node_count());
    }

    #[test]
    fn kgrams_examples() {
        let bigrams = extract_kgrams(&look_over_ref(), 2);
        assert_eq!(
            bigrams,
            vec![KGram(vec!["look-over-06".into(), "ARG1".into(), "flag".into()])]
        );
        let path = parse_penman("(a / a :r1 (b / b :r2 (c / c)))").unwrap();
        let tri = extract_kgrams(&path, 3);
        assert_eq!(tri.len(), 1);
        assert_eq!(tri[0].to_string(), "a r1 b r2 c");
        assert_eq!(tri[0].order(), 3);
        let uni = extract_kgrams(&path, 1);
        assert_eq!(uni.len(), 3);
    }

    #[test]
    fn kgrams_guard_cycles() {
        let g = parse_penman("(x / x :ARG0 (y / y :ARG0 x))").unwrap();
        assert_eq!(extract_kgrams(&g, 2).len(), 2);
        assert!(extract_kgrams(&g, 3).is_empty());
    }
}
