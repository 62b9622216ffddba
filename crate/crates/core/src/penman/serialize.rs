use std::fmt::Write;

use super::graph::{AmrEntry, AmrGraph};

const INDENT: &str = "    ";

/// Writes `g` in Penman notation, rooted at its root node.
///
/// Edges whose source is reached after their target are emitted as inverse
/// roles (`:ARG0-of`); a node already printed appears as a bare variable.
pub fn serialize_penman(g: &AmrGraph) -> String {
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); g.node_count()];
    for (i, e) in g.edges().iter().enumerate() {
        incident[e.source].push(i);
        if e.target != e.source {
            incident[e.target].push(i);
        }
    }
    let mut attrs: Vec<Vec<usize>> = vec![Vec::new(); g.node_count()];
    for (i, a) in g.attributes().iter().enumerate() {
        attrs[a.source].push(i);
    }
    let mut w = Writer {
        g,
        incident,
        attrs,
        visited: vec![false; g.node_count()],
        emitted: vec![false; g.edges().len()],
        out: String::new(),
    };
    w.node(g.root(), 1);
    w.out
}

/// Writes entries separated by blank lines, metadata first.
pub fn serialize_corpus(entries: &[AmrEntry]) -> String {
    let mut out = String::new();
    for (i, e) in entries.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        for (k, v) in &e.metadata {
            let _ = writeln!(out, "# ::{k} {v}");
        }
        out.push_str(&serialize_penman(&e.graph));
        out.push('\n');
    }
    out
}

struct Writer<'a> {
    g: &'a AmrGraph,
    incident: Vec<Vec<usize>>,
    attrs: Vec<Vec<usize>>,
    visited: Vec<bool>,
    emitted: Vec<bool>,
    out: String,
}

impl Writer<'_> {
    fn node(&mut self, v: usize, depth: usize) {
        self.visited[v] = true;
        let _ = write!(self.out, "({} / {}", self.g.var(v), self.g.concept(v));
        for k in 0..self.incident[v].len() {
            let ei = self.incident[v][k];
            if self.emitted[ei] {
                continue;
            }
            self.emitted[ei] = true;
            let e = &self.g.edges()[ei];
            let (role, other) = if e.source == v {
                (e.role.clone(), e.target)
            } else {
                (format!("{}-of", e.role), e.source)
            };
            self.newline(depth);
            let _ = write!(self.out, ":{role} ");
            if self.visited[other] {
                self.out.push_str(self.g.var(other));
            } else {
                self.node(other, depth + 1);
            }
        }
        for k in 0..self.attrs[v].len() {
            let a = &self.g.attributes()[self.attrs[v][k]];
            self.newline(depth);
            let _ = write!(self.out, ":{} {}", a.role, quote_constant(&a.value));
        }
        self.out.push(')');
    }

    fn newline(&mut self, depth: usize) {
        self.out.push('\n');
        for _ in 0..depth {
            self.out.push_str(INDENT);
        }
    }
}

/// Numbers and `+`/`-` stay bare; everything else is quoted.
fn quote_constant(v: &str) -> String {
    let bare = v == "-" || v == "+" || (!v.is_empty() && v.parse::<f64>().is_ok());
    if bare {
        v.to_string()
    } else {
        format!("\"{}\"", v.replace('\\', "\\\\").replace('"', "\\\""))
    }
}
