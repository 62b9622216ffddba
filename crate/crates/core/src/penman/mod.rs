//! AMR graphs in Penman notation: parsing, serialization, triples, and the
//! structural transforms the metrics are built on.

mod graph;
mod parse;
mod serialize;
pub(crate) mod transform;

use thiserror::Error;

pub use graph::{AmrEntry, AmrGraph, Arc, Attribute, Edge, GraphBuilder, LabeledView, Node};
pub use parse::{parse_entry, parse_penman, read_corpus};
pub use serialize::{serialize_corpus, serialize_penman};
pub use transform::{
    edge_to_node_transform, extract_kgrams, kgram_bag, to_triples, KGram, Triple, E2N_EDGE_LABEL,
    TOP_ROLE,
};

/// Structural invariant violations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graph has no nodes")]
    Empty,
    #[error("node index {0} out of range")]
    NodeOutOfRange(usize),
    #[error("variable {0} has an empty concept")]
    EmptyConcept(String),
    #[error("variable {0} defined twice")]
    DuplicateVariable(String),
    #[error("unknown variable {0}")]
    UnknownVariable(String),
    #[error("edge weight {0} is not a finite nonnegative number")]
    BadWeight(String),
    #[error("graph is disconnected: {reached} of {total} nodes reachable from root")]
    Disconnected { reached: usize, total: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unbalanced parentheses")]
    Unbalanced,
    #[error("variable {0} defined twice")]
    DuplicateVariable(String),
    #[error("reference to undefined variable {0}")]
    DanglingReentrancy(String),
    #[error("node has no concept")]
    EmptyConcept,
    #[error("empty role name")]
    EmptyRole,
    #[error("unterminated string")]
    UnterminatedString,
    #[error("unexpected {0}")]
    Unexpected(String),
    #[error("input continues after the graph")]
    TrailingInput,
    #[error("no graph found")]
    NoGraph,
    #[error(transparent)]
    Invalid(GraphError),
}

/// Parse failure with a 1-based source location.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}
