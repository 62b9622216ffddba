use std::collections::HashMap;

use super::graph::{AmrEntry, AmrGraph, Attribute, Edge, Node};
use super::{ParseError, ParseErrorKind};

/// Roles ending in `-of` that are not inversions.
const NON_INVERTED_OF: &[&str] = &["consist-of", "prep-out-of", "prep-on-behalf-of"];

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Open,
    Close,
    Slash,
    Role(String),
    Quoted(String),
    Symbol(String),
}

#[derive(Debug, Clone, Copy)]
struct Pos {
    line: usize,
    column: usize,
}

fn err(pos: Pos, kind: ParseErrorKind) -> ParseError {
    ParseError {
        line: pos.line,
        column: pos.column,
        kind,
    }
}

fn tokenize(text: &str, first_line: usize) -> Result<Vec<(Tok, Pos)>, ParseError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let mut line = first_line;
    let mut column = 1;
    while let Some(&c) = chars.peek() {
        let pos = Pos { line, column };
        match c {
            '\n' => {
                chars.next();
                line += 1;
                column = 1;
                continue;
            }
            c if c.is_whitespace() => {
                chars.next();
                column += 1;
                continue;
            }
            '(' => {
                chars.next();
                column += 1;
                out.push((Tok::Open, pos));
            }
            ')' => {
                chars.next();
                column += 1;
                out.push((Tok::Close, pos));
            }
            '/' => {
                chars.next();
                column += 1;
                out.push((Tok::Slash, pos));
            }
            '"' => {
                chars.next();
                column += 1;
                let mut s = String::new();
                let mut closed = false;
                while let Some(c) = chars.next() {
                    column += 1;
                    match c {
                        '\\' => {
                            if let Some(n) = chars.next() {
                                column += 1;
                                s.push(n);
                            }
                        }
                        '"' => {
                            closed = true;
                            break;
                        }
                        '\n' => {
                            line += 1;
                            column = 1;
                            s.push(c);
                        }
                        _ => s.push(c),
                    }
                }
                if !closed {
                    return Err(err(pos, ParseErrorKind::UnterminatedString));
                }
                // Alignment suffixes after a closing quote ("Jon"~e.3).
                if chars.peek() == Some(&'~') {
                    while let Some(&c) = chars.peek() {
                        if c.is_whitespace() || c == '(' || c == ')' {
                            break;
                        }
                        chars.next();
                        column += 1;
                    }
                }
                out.push((Tok::Quoted(s), pos));
            }
            _ => {
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_whitespace() || c == '(' || c == ')' || c == '"' {
                        break;
                    }
                    // A slash only separates when it stands alone or follows a variable.
                    if c == '/' && !s.is_empty() && !s.starts_with(':') {
                        break;
                    }
                    s.push(c);
                    chars.next();
                    column += 1;
                }
                if let Some(role) = s.strip_prefix(':') {
                    if role.is_empty() {
                        return Err(err(pos, ParseErrorKind::EmptyRole));
                    }
                    out.push((Tok::Role(strip_alignment(role).to_string()), pos));
                } else {
                    out.push((Tok::Symbol(strip_alignment(&s).to_string()), pos));
                }
            }
        }
    }
    Ok(out)
}

/// Drops `~e.3`-style alignment markers from a symbol.
fn strip_alignment(s: &str) -> &str {
    match s.find('~') {
        Some(i) if i > 0 => {
            let rest = &s[i + 1..];
            let rest = rest.strip_prefix("e.").unwrap_or(rest);
            if !rest.is_empty()
                && rest
                    .chars()
                    .all(|c| c.is_ascii_digit() || c == ',' || c == '.')
            {
                &s[..i]
            } else {
                s
            }
        }
        _ => s,
    }
}

fn looks_like_variable(s: &str) -> bool {
    let letters = s.chars().take_while(|c| c.is_ascii_lowercase()).count();
    if letters == 0 {
        return false;
    }
    let rest = &s[letters..];
    (letters == 1 && rest.is_empty())
        || (!rest.is_empty() && rest.chars().all(|c| c.is_ascii_digit()))
}

/// Splits an inverse role into its forward form.
pub(crate) fn normalize_role(role: &str) -> (String, bool) {
    if let Some(base) = role.strip_suffix("-of") {
        if !base.is_empty() && !NON_INVERTED_OF.contains(&role.to_ascii_lowercase().as_str()) {
            return (base.to_string(), true);
        }
    }
    (role.to_string(), false)
}

enum Target {
    Node(RawNode),
    Quoted(String),
    Symbol(String, Pos),
}

struct RawNode {
    var: String,
    var_pos: Pos,
    concept: String,
    children: Vec<(String, Target)>,
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
    end: Pos,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(t, _)| t)
    }

    fn pos(&self) -> Pos {
        self.toks.get(self.at).map(|(_, p)| *p).unwrap_or(self.end)
    }

    fn next(&mut self) -> Option<(Tok, Pos)> {
        let t = self.toks.get(self.at).cloned();
        self.at += 1;
        t
    }

    fn node(&mut self, open: Pos) -> Result<RawNode, ParseError> {
        let (var, var_pos) = match self.next() {
            Some((Tok::Symbol(s), p)) => (s, p),
            Some((Tok::Close, p)) => return Err(err(p, ParseErrorKind::EmptyConcept)),
            Some((t, p)) => return Err(err(p, ParseErrorKind::Unexpected(describe(&t)))),
            None => return Err(err(open, ParseErrorKind::Unbalanced)),
        };
        match self.next() {
            Some((Tok::Slash, _)) => {}
            Some((_, p)) => return Err(err(p, ParseErrorKind::EmptyConcept)),
            None => return Err(err(open, ParseErrorKind::Unbalanced)),
        }
        let concept = match self.next() {
            Some((Tok::Symbol(s), _)) | Some((Tok::Quoted(s), _)) if !s.is_empty() => s,
            Some((_, p)) => return Err(err(p, ParseErrorKind::EmptyConcept)),
            None => return Err(err(open, ParseErrorKind::Unbalanced)),
        };
        let mut children = Vec::new();
        loop {
            match self.next() {
                Some((Tok::Close, _)) => break,
                Some((Tok::Role(role), role_pos)) => {
                    let target = match self.next() {
                        Some((Tok::Open, p)) => Target::Node(self.node(p)?),
                        Some((Tok::Quoted(s), _)) => Target::Quoted(s),
                        Some((Tok::Symbol(s), p)) => Target::Symbol(s, p),
                        Some((t, p)) => {
                            return Err(err(p, ParseErrorKind::Unexpected(describe(&t))))
                        }
                        None => return Err(err(role_pos, ParseErrorKind::Unbalanced)),
                    };
                    children.push((role, target));
                }
                Some((t, p)) => return Err(err(p, ParseErrorKind::Unexpected(describe(&t)))),
                None => return Err(err(open, ParseErrorKind::Unbalanced)),
            }
        }
        Ok(RawNode {
            var,
            var_pos,
            concept,
            children,
        })
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Open => "'('".into(),
        Tok::Close => "')'".into(),
        Tok::Slash => "'/'".into(),
        Tok::Role(r) => format!("role :{r}"),
        Tok::Quoted(s) => format!("string \"{s}\""),
        Tok::Symbol(s) => format!("symbol {s}"),
    }
}

struct Lowering {
    nodes: Vec<Node>,
    index: HashMap<String, usize>,
    edges: Vec<Edge>,
    attributes: Vec<Attribute>,
}

impl Lowering {
    fn declare(&mut self, raw: &RawNode) -> Result<(), ParseError> {
        if self.index.contains_key(&raw.var) {
            return Err(err(
                raw.var_pos,
                ParseErrorKind::DuplicateVariable(raw.var.clone()),
            ));
        }
        self.index.insert(raw.var.clone(), self.nodes.len());
        self.nodes.push(Node {
            var: raw.var.clone(),
            concept: raw.concept.clone(),
        });
        for (_, t) in &raw.children {
            if let Target::Node(child) = t {
                self.declare(child)?;
            }
        }
        Ok(())
    }

    fn link(&mut self, raw: &RawNode) -> Result<(), ParseError> {
        let me = self.index[&raw.var];
        for (role, target) in &raw.children {
            let (base, inverted) = normalize_role(role);
            let other = match target {
                Target::Node(child) => Some(self.index[&child.var]),
                Target::Symbol(s, p) => match self.index.get(s) {
                    Some(&i) => Some(i),
                    None if looks_like_variable(s) => {
                        return Err(err(*p, ParseErrorKind::DanglingReentrancy(s.clone())))
                    }
                    None => None,
                },
                Target::Quoted(_) => None,
            };
            match (other, target) {
                (Some(o), _) => {
                    let (source, target) = if inverted { (o, me) } else { (me, o) };
                    self.edges.push(Edge {
                        source,
                        role: base,
                        target,
                        weight: 1.0,
                    });
                }
                (None, Target::Symbol(s, _)) | (None, Target::Quoted(s)) => {
                    self.attributes.push(Attribute {
                        source: me,
                        role: role.clone(),
                        value: s.clone(),
                    });
                }
                (None, Target::Node(_)) => unreachable!(),
            }
            if let Target::Node(child) = target {
                self.link(child)?;
            }
        }
        Ok(())
    }
}

fn parse_graph_at(text: &str, first_line: usize) -> Result<AmrGraph, ParseError> {
    let toks = tokenize(text, first_line)?;
    let end = toks
        .last()
        .map(|(_, p)| *p)
        .unwrap_or(Pos {
            line: first_line,
            column: 1,
        });
    let mut p = Parser { toks, at: 0, end };
    let open = p.pos();
    match p.next() {
        Some((Tok::Open, _)) => {}
        Some((t, pos)) => return Err(err(pos, ParseErrorKind::Unexpected(describe(&t)))),
        None => return Err(err(open, ParseErrorKind::NoGraph)),
    }
    let raw = p.node(open)?;
    if let Some(t) = p.peek() {
        let kind = if *t == Tok::Close {
            ParseErrorKind::Unbalanced
        } else {
            ParseErrorKind::TrailingInput
        };
        return Err(err(p.pos(), kind));
    }
    let mut low = Lowering {
        nodes: Vec::new(),
        index: HashMap::new(),
        edges: Vec::new(),
        attributes: Vec::new(),
    };
    low.declare(&raw)?;
    low.link(&raw)?;
    AmrGraph::new(0, low.nodes, low.edges, low.attributes).map_err(|e| {
        err(
            Pos {
                line: first_line,
                column: 1,
            },
            ParseErrorKind::Invalid(e),
        )
    })
}

/// Parses one Penman expression, skipping any leading `#` comment lines.
pub fn parse_penman(text: &str) -> Result<AmrGraph, ParseError> {
    parse_entry_at(text, 1).map(|e| e.graph)
}

/// Parses one Penman expression together with its `# ::` metadata.
pub fn parse_entry(text: &str) -> Result<AmrEntry, ParseError> {
    parse_entry_at(text, 1)
}

fn parse_entry_at(text: &str, first_line: usize) -> Result<AmrEntry, ParseError> {
    let mut metadata = Vec::new();
    let mut body_start = None;
    let mut offset = 0;
    for (i, line) in text.split_inclusive('\n').enumerate() {
        let trimmed = line.trim_start();
        if trimmed.starts_with('#') {
            metadata.extend(parse_metadata_line(trimmed));
        } else if !trimmed.trim().is_empty() {
            body_start = Some((offset, first_line + i));
            break;
        }
        offset += line.len();
    }
    let (start, line) = body_start.ok_or_else(|| {
        err(
            Pos {
                line: first_line,
                column: 1,
            },
            ParseErrorKind::NoGraph,
        )
    })?;
    let graph = parse_graph_at(&text[start..], line)?;
    let find = |key: &str| {
        metadata
            .iter()
            .find(|(k, _): &&(String, String)| k == key)
            .map(|(_, v)| v.clone())
    };
    Ok(AmrEntry {
        id: find("id"),
        sentence: find("snt"),
        tokens: find("tok"),
        metadata,
        graph,
    })
}

/// `# ::id a ::date b` → [("id","a"), ("date","b")]. Plain comments yield nothing.
/// A `::snt` value runs to the end of the line, since sentences may contain "::".
fn parse_metadata_line(line: &str) -> Vec<(String, String)> {
    let body = line.trim_start_matches('#').trim();
    let mut out = Vec::new();
    let mut rest = match body.strip_prefix("::") {
        Some(r) => r,
        None => return out,
    };
    loop {
        let (key, after) = match rest.split_once(char::is_whitespace) {
            Some((k, a)) => (k, a),
            None => (rest, ""),
        };
        if key == "snt" {
            out.push((key.to_string(), after.trim().to_string()));
            break;
        }
        match after.find("::") {
            Some(i) => {
                out.push((key.to_string(), after[..i].trim().to_string()));
                rest = &after[i + 2..];
            }
            None => {
                out.push((key.to_string(), after.trim().to_string()));
                break;
            }
        }
    }
    out.retain(|(k, _)| !k.is_empty());
    out
}

/// Reads a corpus: graphs separated by blank lines, each optionally preceded
/// by `# ::` metadata. Comment-only blocks are skipped.
pub fn read_corpus(text: &str) -> Result<Vec<AmrEntry>, ParseError> {
    let mut entries = Vec::new();
    let mut block = String::new();
    let mut block_line = 1;
    let mut has_graph = false;
    let lines: Vec<&str> = text.lines().collect();
    for (i, line) in lines.iter().enumerate() {
        if line.trim().is_empty() {
            if has_graph {
                entries.push(parse_entry_at(&block, block_line)?);
            }
            block.clear();
            has_graph = false;
            continue;
        }
        if block.is_empty() {
            block_line = i + 1;
        }
        if !line.trim_start().starts_with('#') {
            has_graph = true;
        }
        block.push_str(line);
        block.push('\n');
    }
    if has_graph {
        entries.push(parse_entry_at(&block, block_line)?);
    }
    Ok(entries)
}
