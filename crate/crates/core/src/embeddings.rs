//! Word vectors for concept and role labels.
//!
//! Out-of-vocabulary tokens are modeled as random vectors with i.i.d.
//! zero-mean components of variance `σ²`. Instead of sampling them, distances
//! involving such tokens are replaced by their expectation, which keeps every
//! downstream score deterministic without fixing a seed.

use std::collections::HashMap;
use std::fs;
use std::path::Path;

use serde::Serialize;
use thiserror::Error;

/// Dimension of the built-in hashed vectors.
pub const FALLBACK_DIMENSION: usize = 32;

#[derive(Debug, Error)]
pub enum EmbeddingError {
    #[error("cannot read embeddings: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: expected {expected} components, found {found}")]
    DimensionMismatch {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("line {line}: cannot parse component {text:?}")]
    BadComponent { line: usize, text: String },
    #[error("embedding file contains no vectors")]
    Empty,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DistanceKind {
    Exact,
    Expected,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TokenDistance {
    pub value: f64,
    pub kind: DistanceKind,
}

/// Immutable token → vector table with an expected-value OOV model.
#[derive(Debug, Clone)]
pub struct EmbeddingStore {
    dimension: usize,
    table: HashMap<String, Vec<f64>>,
    oov_variance: f64,
}

impl EmbeddingStore {
    /// Builds a store; `σ²` is the mean per-component variance of the table.
    pub fn from_table(table: HashMap<String, Vec<f64>>) -> Result<Self, EmbeddingError> {
        let dimension = match table.values().next() {
            Some(v) => v.len(),
            None => return Err(EmbeddingError::Empty),
        };
        if let Some(bad) = table.values().find(|v| v.len() != dimension) {
            return Err(EmbeddingError::DimensionMismatch {
                line: 0,
                expected: dimension,
                found: bad.len(),
            });
        }
        let oov_variance = pooled_component_variance(&table, dimension);
        Ok(EmbeddingStore {
            dimension,
            table,
            oov_variance,
        })
    }

    /// Same table with an explicit OOV component variance.
    pub fn with_oov_variance(mut self, variance: f64) -> Self {
        assert!(variance > 0.0 && variance.is_finite(), "σ² must be positive");
        self.oov_variance = variance;
        self
    }

    /// Reads GloVe-style text: `token c1 c2 ... cd` per line. A leading
    /// word2vec `count dim` header is skipped. `limit` caps the vocabulary.
    pub fn parse(text: &str, limit: Option<usize>) -> Result<Self, EmbeddingError> {
        let mut table = HashMap::new();
        let mut dimension = None;
        for (i, line) in text.lines().enumerate() {
            if limit.is_some_and(|l| table.len() >= l) {
                break;
            }
            let mut fields = line.split_whitespace();
            let Some(token) = fields.next() else { continue };
            let rest: Vec<&str> = fields.collect();
            if i == 0 && rest.len() == 1 && token.parse::<usize>().is_ok() && rest[0].parse::<usize>().is_ok() {
                continue;
            }
            let mut v = Vec::with_capacity(rest.len());
            for c in rest {
                v.push(c.parse::<f64>().map_err(|_| EmbeddingError::BadComponent {
                    line: i + 1,
                    text: c.to_string(),
                })?);
            }
            match dimension {
                None => dimension = Some(v.len()),
                Some(d) if d != v.len() => {
                    return Err(EmbeddingError::DimensionMismatch {
                        line: i + 1,
                        expected: d,
                        found: v.len(),
                    })
                }
                _ => {}
            }
            table.entry(token.to_string()).or_insert(v);
        }
        if dimension.unwrap_or(0) == 0 {
            return Err(EmbeddingError::Empty);
        }
        Self::from_table(table)
    }

    pub fn load(path: impl AsRef<Path>, limit: Option<usize>) -> Result<Self, EmbeddingError> {
        Self::parse(&fs::read_to_string(path)?, limit)
    }

    /// Seedless hashed vectors for `tokens`; every other token is OOV.
    pub fn hashed<'a>(tokens: impl IntoIterator<Item = &'a str>, dimension: usize) -> Self {
        let table = tokens
            .into_iter()
            .map(|t| {
                let key = normalize_token(t);
                let v = hash_vector(&key, dimension);
                (key, v)
            })
            .collect();
        Self::from_table(table).expect("hashed vocabulary is nonempty and consistent")
    }

    /// Hashed vectors over a built-in vocabulary of frequent AMR concepts and
    /// roles. Used when no embedding file is given.
    pub fn fallback() -> Self {
        Self::hashed(FALLBACK_VOCABULARY.iter().copied(), FALLBACK_DIMENSION)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    /// Per-component variance `σ²` of the OOV model.
    pub fn oov_variance(&self) -> f64 {
        self.oov_variance
    }

    /// Vector for a graph label after normalization, if in vocabulary.
    pub fn lookup(&self, label: &str) -> Option<&[f64]> {
        let norm = normalize_token(label);
        if let Some(v) = self.table.get(&norm) {
            return Some(v);
        }
        let head = norm.split('-').next().unwrap_or(&norm);
        if head != norm {
            if let Some(v) = self.table.get(head) {
                return Some(v);
            }
        }
        None
    }

    /// Key under which `label` is treated: the matched vocabulary entry, or the
    /// normalized token for OOV labels. Two OOV labels share a random vector
    /// iff their keys are equal.
    pub fn key(&self, label: &str) -> String {
        let norm = normalize_token(label);
        if self.table.contains_key(&norm) {
            return norm;
        }
        let head = norm.split('-').next().unwrap_or(&norm).to_string();
        if self.table.contains_key(&head) {
            return head;
        }
        norm
    }

    /// Cosine similarity; `None` if either token is OOV. Identical labels
    /// are 1.0 and a zero vector yields 0.0.
    pub fn cosine_similarity(&self, a: &str, b: &str) -> Option<f64> {
        let va = self.lookup(a)?;
        let vb = self.lookup(b)?;
        if a == b {
            return Some(1.0);
        }
        Some(cosine(va, vb))
    }

    /// Euclidean distance, or its expectation under the OOV model
    /// (square root of the expected squared distance).
    pub fn expected_euclidean_distance(&self, a: &str, b: &str) -> TokenDistance {
        let dsigma = self.dimension as f64 * self.oov_variance;
        match (self.lookup(a), self.lookup(b)) {
            (Some(va), Some(vb)) => TokenDistance {
                value: squared_distance(va, vb).sqrt(),
                kind: DistanceKind::Exact,
            },
            (Some(v), None) | (None, Some(v)) => TokenDistance {
                value: (norm_squared(v) + dsigma).sqrt(),
                kind: DistanceKind::Expected,
            },
            (None, None) => {
                let value = if self.key(a) == self.key(b) {
                    0.0
                } else {
                    (2.0 * dsigma).sqrt()
                };
                TokenDistance {
                    value,
                    kind: DistanceKind::Expected,
                }
            }
        }
    }
}

/// Lowercases and strips a PropBank sense suffix: `look-over-06` → `look-over`.
pub fn normalize_token(label: &str) -> String {
    let lower = label.to_lowercase();
    match lower.rsplit_once('-') {
        Some((head, sense))
            if !head.is_empty() && !sense.is_empty() && sense.chars().all(|c| c.is_ascii_digit()) =>
        {
            head.to_string()
        }
        _ => lower,
    }
}

pub fn cosine(a: &[f64], b: &[f64]) -> f64 {
    let na = norm_squared(a).sqrt();
    let nb = norm_squared(b).sqrt();
    if na == 0.0 || nb == 0.0 {
        return 0.0;
    }
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    (dot / (na * nb)).clamp(-1.0, 1.0)
}

pub(crate) fn norm_squared(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum()
}

pub(crate) fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn pooled_component_variance(table: &HashMap<String, Vec<f64>>, dimension: usize) -> f64 {
    let n = table.len() as f64;
    let fallback = 1.0 / dimension as f64;
    if table.len() < 2 {
        return fallback;
    }
    // Fixed summation order keeps σ² bit-identical across table instances.
    let mut keys: Vec<&String> = table.keys().collect();
    keys.sort_unstable();
    let rows: Vec<&Vec<f64>> = keys.iter().map(|k| &table[*k]).collect();
    let mut total = 0.0;
    for j in 0..dimension {
        let mean = rows.iter().map(|v| v[j]).sum::<f64>() / n;
        total += rows.iter().map(|v| (v[j] - mean).powi(2)).sum::<f64>() / n;
    }
    let var = total / dimension as f64;
    if var > 0.0 && var.is_finite() {
        var
    } else {
        fallback
    }
}

/// FNV-1a seeded splitmix64 stream mapped to uniform [-1, 1), then scaled
/// to unit length.
fn hash_vector(token: &str, dimension: usize) -> Vec<f64> {
    let mut state = token
        .bytes()
        .fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3));
    let v: Vec<f64> = (0..dimension)
        .map(|_| {
            state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
            let mut z = state;
            z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
            z ^= z >> 31;
            (z >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
        })
        .collect();
    let norm = norm_squared(&v).sqrt();
    v.into_iter().map(|x| x / norm).collect()
}

/// Single words only, as in common pretrained vector files; hyphenated
/// concepts resolve through their first segment.
const FALLBACK_VOCABULARY: &[&str] = &[
    // frequent roles
    "arg0", "arg1", "arg2", "arg3", "arg4", "arg5", "op1", "op2", "op3", "op4", "op5", "mod",
    "domain", "name", "time", "location", "manner", "purpose", "cause", "condition", "polarity",
    "quant", "poss", "part", "degree", "direction", "destination", "source", "instrument",
    "beneficiary", "topic", "medium", "duration", "frequency", "extent", "example", "accompanier",
    "age", "unit", "value", "mode", "month", "day", "year", "weekday", "concession", "path",
    "subevent", "ord", "range", "consist", "li", "snt1", "snt2",
    // frequent concepts
    "and", "or", "but", "person", "thing", "name", "country", "city", 
    "organization", "company", 
    "i", "you", "he", "she", "it", "we",
    "they", "this", "that", "all", "many", "some", "more", "most", "other", "new", "good", "bad",
    "big", "small", "little", "odd", "great", "same", "very", "also", "just", "only", "even",
    "now", "then", "ever", "never", "again", "still", "already", "possible", "recommend",
    "obligate", "say", "tell", "ask", "think", "know", "want", "see", "look", 
    "hear", "feel", "go", "come", "make", "take", "give", "get", "have", "do", "use", "find",
    "work", "live", "die", "start", "stop", "begin", "end", "show", "try", "help", "need",
    "like", "love", "hate", "fear", "believe", "mean", "call", "keep", "let", "put", "run",
    "walk", "sit", "stand", "sleep", "wake", "dream", "draw", "paint", "sing", "play", "read",
    "write", "speak", "talk", "answer", "meet", "leave", "arrive", "return", "fly", "fall",
    "grow", "change", "cause", "contrast", "imagine", "amaze", "surprise", "include",
    "resemble", "possible", "prince", "king", "planet", "star", "flower", "rose", "fox",
    "sheep", "box", "snake", "elephant", "hat", "desert", "world", "earth", "sun", "sky",
    "water", "tree", "house", "flag", "voice", "child", "man", "woman", "boy", "girl", "bird",
    "cat", "kitten", "dog", "plant", "animal", "friend", "people", "family", "day", "night",
    "year", "time", "way", "thing", "place", "word", "number", "state", "country", "market",
    "price", "money", "percent", "rate", "official", "president", "police", "military",
    "nation", "war", "attack", "weapon", "report", "state", "law", "right", "power",
    "interrogative", "imperative", "expressive", "over", "up", "down", "out", "in", "on",
    "before", "after", "about", "between",
];
