use std::collections::{HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::GraphError;

/// A variable-bearing node: `(var / concept)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Node {
    pub var: String,
    pub concept: String,
}

/// A relation between two variables, always stored in forward direction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub source: usize,
    pub role: String,
    pub target: usize,
    pub weight: f64,
}

/// A relation from a variable to a constant (`:polarity -`, `:op1 "Jon"`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Attribute {
    pub source: usize,
    pub role: String,
    pub value: String,
}

/// Rooted, directed, labeled AMR graph.
///
/// Nodes are addressed by index; `var` names are kept for serialization and
/// alignment output. Construction always goes through [`AmrGraph::new`], which
/// enforces the structural invariants, so every value of this type is valid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AmrGraph {
    root: usize,
    nodes: Vec<Node>,
    edges: Vec<Edge>,
    attributes: Vec<Attribute>,
}

impl AmrGraph {
    pub fn new(
        root: usize,
        nodes: Vec<Node>,
        edges: Vec<Edge>,
        attributes: Vec<Attribute>,
    ) -> Result<Self, GraphError> {
        let graph = AmrGraph {
            root,
            nodes,
            edges,
            attributes,
        };
        graph.validate()?;
        Ok(graph)
    }

    fn validate(&self) -> Result<(), GraphError> {
        let n = self.nodes.len();
        if n == 0 {
            return Err(GraphError::Empty);
        }
        if self.root >= n {
            return Err(GraphError::NodeOutOfRange(self.root));
        }
        let mut seen = HashSet::with_capacity(n);
        for node in &self.nodes {
            if node.concept.is_empty() {
                return Err(GraphError::EmptyConcept(node.var.clone()));
            }
            if !seen.insert(node.var.as_str()) {
                return Err(GraphError::DuplicateVariable(node.var.clone()));
            }
        }
        for e in &self.edges {
            if e.source >= n {
                return Err(GraphError::NodeOutOfRange(e.source));
            }
            if e.target >= n {
                return Err(GraphError::NodeOutOfRange(e.target));
            }
            if !(e.weight.is_finite() && e.weight >= 0.0) {
                return Err(GraphError::BadWeight(e.weight.to_string()));
            }
        }
        for a in &self.attributes {
            if a.source >= n {
                return Err(GraphError::NodeOutOfRange(a.source));
            }
        }
        let reached = self.undirected_reach(self.root);
        if reached < n {
            return Err(GraphError::Disconnected {
                reached,
                total: n,
            });
        }
        Ok(())
    }

    fn undirected_reach(&self, start: usize) -> usize {
        let adj = self.undirected_adjacency();
        let mut seen = vec![false; self.nodes.len()];
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for &u in &adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    count += 1;
                    queue.push_back(u);
                }
            }
        }
        count
    }

    fn undirected_adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.nodes.len()];
        for e in &self.edges {
            adj[e.source].push(e.target);
            adj[e.target].push(e.source);
        }
        adj
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn attributes(&self) -> &[Attribute] {
        &self.attributes
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn concept(&self, node: usize) -> &str {
        &self.nodes[node].concept
    }

    pub fn var(&self, node: usize) -> &str {
        &self.nodes[node].var
    }

    pub fn index_of(&self, var: &str) -> Option<usize> {
        self.nodes.iter().position(|n| n.var == var)
    }

    /// Same graph with every variable renamed through `rename`.
    ///
    /// The mapping must be injective over this graph's variables.
    pub fn rename_vars<F>(&self, mut rename: F) -> Result<AmrGraph, GraphError>
    where
        F: FnMut(&str) -> String,
    {
        let nodes = self
            .nodes
            .iter()
            .map(|n| Node {
                var: rename(&n.var),
                concept: n.concept.clone(),
            })
            .collect();
        AmrGraph::new(
            self.root,
            nodes,
            self.edges.clone(),
            self.attributes.clone(),
        )
    }

    /// Copy with every edge weight replaced by `weight`.
    pub fn with_uniform_weights(&self, weight: f64) -> AmrGraph {
        let mut g = self.clone();
        for e in &mut g.edges {
            e.weight = weight;
        }
        g
    }

    /// View in which attribute constants become leaf nodes.
    ///
    /// Labels of the first `node_count()` entries are the concepts, the rest
    /// are constants in attribute order. Used by every metric that treats the
    /// graph as a plain labeled graph (k-grams, WL, bag-of-labels).
    pub fn labeled_view(&self) -> LabeledView {
        let mut labels: Vec<String> = self.nodes.iter().map(|n| n.concept.clone()).collect();
        let mut arcs: Vec<Arc> = self
            .edges
            .iter()
            .map(|e| Arc {
                source: e.source,
                label: e.role.clone(),
                target: e.target,
                weight: e.weight,
            })
            .collect();
        for a in &self.attributes {
            let leaf = labels.len();
            labels.push(a.value.clone());
            arcs.push(Arc {
                source: a.source,
                label: a.role.clone(),
                target: leaf,
                weight: 1.0,
            });
        }
        LabeledView { labels, arcs }
    }
}

/// Directed labeled arc in a [`LabeledView`].
#[derive(Debug, Clone, PartialEq)]
pub struct Arc {
    pub source: usize,
    pub label: String,
    pub target: usize,
    pub weight: f64,
}

/// Node-labeled, arc-labeled graph with attribute constants as leaves.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledView {
    pub labels: Vec<String>,
    pub arcs: Vec<Arc>,
}

impl LabeledView {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Outgoing arcs per node, in arc order.
    pub fn outgoing(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.labels.len()];
        for (i, a) in self.arcs.iter().enumerate() {
            out[a.source].push(i);
        }
        out
    }

    /// Neighbors in both arc directions as `(neighbor, arc index)`.
    pub fn neighbors(&self) -> Vec<Vec<(usize, usize)>> {
        let mut nb = vec![Vec::new(); self.labels.len()];
        for (i, a) in self.arcs.iter().enumerate() {
            nb[a.source].push((a.target, i));
            nb[a.target].push((a.source, i));
        }
        nb
    }
}

/// One AMR from a corpus file plus its `# ::` metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct AmrEntry {
    pub id: Option<String>,
    pub sentence: Option<String>,
    pub tokens: Option<String>,
    /// Every `::key value` pair in file order, including id/snt/tok.
    pub metadata: Vec<(String, String)>,
    pub graph: AmrGraph,
}

impl AmrEntry {
    pub fn new(graph: AmrGraph) -> Self {
        AmrEntry {
            id: None,
            sentence: None,
            tokens: None,
            metadata: Vec::new(),
            graph,
        }
    }

    pub fn meta(&self, key: &str) -> Option<&str> {
        self.metadata
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }
}

/// Incrementally builds a graph from variable names.
#[derive(Debug, Default)]
pub struct GraphBuilder {
    nodes: Vec<Node>,
    index: HashMap<String, usize>,
    edges: Vec<Edge>,
    attributes: Vec<Attribute>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn node(&mut self, var: &str, concept: &str) -> Result<usize, GraphError> {
        if self.index.contains_key(var) {
            return Err(GraphError::DuplicateVariable(var.to_string()));
        }
        let idx = self.nodes.len();
        self.nodes.push(Node {
            var: var.to_string(),
            concept: concept.to_string(),
        });
        self.index.insert(var.to_string(), idx);
        Ok(idx)
    }

    pub fn edge(&mut self, source: &str, role: &str, target: &str) -> Result<(), GraphError> {
        let s = self.lookup(source)?;
        let t = self.lookup(target)?;
        self.edges.push(Edge {
            source: s,
            role: role.to_string(),
            target: t,
            weight: 1.0,
        });
        Ok(())
    }

    pub fn attribute(&mut self, source: &str, role: &str, value: &str) -> Result<(), GraphError> {
        let s = self.lookup(source)?;
        self.attributes.push(Attribute {
            source: s,
            role: role.to_string(),
            value: value.to_string(),
        });
        Ok(())
    }

    fn lookup(&self, var: &str) -> Result<usize, GraphError> {
        self.index
            .get(var)
            .copied()
            .ok_or_else(|| GraphError::UnknownVariable(var.to_string()))
    }

    /// Finish with the first declared node as root.
    pub fn build(self) -> Result<AmrGraph, GraphError> {
        AmrGraph::new(0, self.nodes, self.edges, self.attributes)
    }
}
