//! Report assembly on top of a frozen [`ScoreTable`].
//!
//! Every number in a report is produced by the library functions in
//! [`crate::stats`]; nothing here computes statistics of its own.

use std::fmt::Write;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::metrics::MetricId;
use crate::penman::{edge_to_node_transform, kgram_bag, to_triples, AmrEntry};
use crate::stats::{
    acceptability_delta, bootstrap_ci, corpus_score_macro, corpus_score_micro, derive_seed,
    length_buckets, pairwise_accuracy, preference_counts, preference_test, sentence_length,
    spearman_matrix, BinomialResult, EvalCorpus, HumanJudgments, LengthBucket, ScoreTable,
    StatsError, TiesMode, LENGTH_CAP,
};

/// Significance level for flagging preference tests.
pub const ALPHA: f64 = 0.05;

/// Printed with every corpus score report.
pub const MACRO_RECOMMENDATION: &str =
    "macro scores weight every sentence equally; micro scores favor long sentences. Prefer macro when ranking parsers.";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Aggregate {
    Micro,
    Macro,
    #[default]
    Both,
}

impl Aggregate {
    pub fn micro(self) -> bool {
        matches!(self, Aggregate::Micro | Aggregate::Both)
    }

    pub fn macro_(self) -> bool {
        matches!(self, Aggregate::Macro | Aggregate::Both)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown aggregation {0:?} (expected micro, macro or both)")]
pub struct UnknownAggregate(pub String);

impl FromStr for Aggregate {
    type Err = UnknownAggregate;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "micro" => Ok(Aggregate::Micro),
            "macro" => Ok(Aggregate::Macro),
            "both" => Ok(Aggregate::Both),
            _ => Err(UnknownAggregate(s.to_string())),
        }
    }
}

/// Where a report came from.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Provenance {
    pub tool_version: String,
    /// Hex digest of the canonical run configuration.
    pub config_hash: String,
    pub alignment: String,
    pub seed: u64,
}

/// A value for parser A, parser B, and their difference `A - B`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Paired {
    pub a: f64,
    pub b: f64,
    pub delta: f64,
}

impl Paired {
    fn new(a: f64, b: f64) -> Self {
        Paired { a, b, delta: a - b }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScoreRow {
    pub metric: MetricId,
    pub macro_score: Option<f64>,
    pub micro_score: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScoreReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Provenance>,
    pub parser: String,
    pub items: usize,
    pub note: &'static str,
    pub rows: Vec<ScoreRow>,
}

fn micro_if(
    table: &ScoreTable,
    metric: MetricId,
    parser: &str,
    smoothing: bool,
) -> Result<Option<f64>, StatsError> {
    if !metric.supports_micro() {
        return Ok(None);
    }
    corpus_score_micro(table.scores(metric, parser), smoothing).map(Some)
}

/// Micro and macro corpus scores of one parser for every metric in `table`.
///
/// Micro is left empty for metrics without pooled counts.
pub fn score_report(
    table: &ScoreTable,
    parser: &str,
    aggregate: Aggregate,
    sembleu_smoothing: bool,
) -> Result<ScoreReport, StatsError> {
    let mut rows = Vec::new();
    for &m in table.metrics() {
        let macro_score = if aggregate.macro_() {
            Some(corpus_score_macro(&table.similarities(m, parser))?)
        } else {
            None
        };
        let micro_score = if aggregate.micro() {
            micro_if(table, m, parser, sembleu_smoothing)?
        } else {
            None
        };
        rows.push(ScoreRow {
            metric: m,
            macro_score,
            micro_score,
        });
    }
    Ok(ScoreReport {
        provenance: None,
        parser: parser.to_string(),
        items: table.ids().len(),
        note: MACRO_RECOMMENDATION,
        rows,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompareRow {
    pub metric: MetricId,
    pub preference: Paired,
    pub test: BinomialResult,
    pub significant: bool,
    pub macro_score: Option<Paired>,
    pub micro_score: Option<Paired>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompareReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Provenance>,
    pub parser_a: String,
    pub parser_b: String,
    pub items: usize,
    pub note: &'static str,
    pub rows: Vec<CompareRow>,
}

/// Side-by-side corpus scores and preference counts for two parsers.
pub fn compare_report(
    table: &ScoreTable,
    a: &str,
    b: &str,
    aggregate: Aggregate,
    ties: TiesMode,
    sembleu_smoothing: bool,
) -> Result<CompareReport, StatsError> {
    let mut rows = Vec::new();
    for &m in table.metrics() {
        let sa = table.similarities(m, a);
        let sb = table.similarities(m, b);
        let (pa, pb) = preference_counts(&sa, &sb)?;
        let test = preference_test(&sa, &sb, ties)?;
        let macro_score = if aggregate.macro_() {
            Some(Paired::new(corpus_score_macro(&sa)?, corpus_score_macro(&sb)?))
        } else {
            None
        };
        let micro_score = if aggregate.micro() {
            match (
                micro_if(table, m, a, sembleu_smoothing)?,
                micro_if(table, m, b, sembleu_smoothing)?,
            ) {
                (Some(x), Some(y)) => Some(Paired::new(x, y)),
                _ => None,
            }
        } else {
            None
        };
        rows.push(CompareRow {
            metric: m,
            preference: Paired::new(pa, pb),
            significant: test.p_value.is_some_and(|p| p < ALPHA),
            test,
            macro_score,
            micro_score,
        });
    }
    Ok(CompareReport {
        provenance: None,
        parser_a: a.to_string(),
        parser_b: b.to_string(),
        items: table.ids().len(),
        note: MACRO_RECOMMENDATION,
        rows,
    })
}

/// One agreement statistic with its bootstrap interval.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub ci: Option<(f64, f64)>,
    /// The random-baseline value lies outside the interval.
    pub beats_random: bool,
}

impl Estimate {
    fn new(value: f64, ci: Option<(f64, f64)>, random: f64) -> Self {
        Estimate {
            value,
            ci,
            beats_random: ci.is_some_and(|(lo, hi)| random < lo || random > hi),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetaRow {
    /// Metric id, or `HUM` / `RAND` for the anchor rows.
    pub name: String,
    pub pairwise_accuracy: Estimate,
    pub acceptability_delta: Estimate,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetaEvalReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Provenance>,
    pub parser_a: String,
    pub parser_b: String,
    pub signed_items: usize,
    pub acceptable: usize,
    pub unacceptable: usize,
    pub bootstrap_resamples: usize,
    pub rows: Vec<MetaRow>,
}

pub const RANDOM_PA: f64 = 0.5;
pub const RANDOM_ACCEPTABILITY_DELTA: f64 = 0.0;

/// Resolves a parser named in an annotation file: its id, or `a` / `b`.
fn resolve_parser<'a>(name: &str, a: &'a str, b: &'a str) -> Option<&'a str> {
    if name == a {
        Some(a)
    } else if name == b {
        Some(b)
    } else if name == "a" {
        Some(a)
    } else if name == "b" {
        Some(b)
    } else {
        None
    }
}

/// Annotated parses as (item index, is parser A, acceptable), in a stable order.
fn acceptability_rows(
    corpus: &EvalCorpus,
    judgments: &HumanJudgments,
    a: &str,
    b: &str,
) -> Result<Vec<(usize, bool, bool)>, StatsError> {
    let mut rows = Vec::new();
    for ((id, parser), &ok) in &judgments.acceptability {
        let idx = corpus.position(id).ok_or_else(|| StatsError::UnknownId(id.clone()))?;
        let p = resolve_parser(parser, a, b).ok_or_else(|| StatsError::UnknownParser(parser.clone()))?;
        rows.push((idx, p == a, ok));
    }
    rows.sort();
    rows.dedup_by_key(|r| (r.0, r.1));
    Ok(rows)
}

/// Pairwise accuracy and acceptability delta of every metric against the
/// human labels, with percentile bootstrap intervals, plus the `HUM` and
/// `RAND` anchor rows.
pub fn meta_eval_report(
    corpus: &EvalCorpus,
    table: &ScoreTable,
    a: &str,
    b: &str,
    judgments: &HumanJudgments,
    bootstrap_b: usize,
    seed: u64,
) -> Result<MetaEvalReport, StatsError> {
    let mut signed = Vec::new();
    for (id, &p) in &judgments.preferences {
        let idx = corpus.position(id).ok_or_else(|| StatsError::UnknownId(id.clone()))?;
        if p != 0 {
            signed.push((idx, p));
        }
    }
    if signed.is_empty() {
        return Err(StatsError::NoSignedItems);
    }
    let accept = acceptability_rows(corpus, judgments, a, b)?;
    let labels: Vec<bool> = accept.iter().map(|r| r.2).collect();
    let n_ok = labels.iter().filter(|&&l| l).count();
    if n_ok == 0 {
        return Err(StatsError::EmptyClass("acceptable"));
    }
    if n_ok == labels.len() {
        return Err(StatsError::EmptyClass("unacceptable"));
    }

    let pa_stat = |s: &[(f64, i8)]| {
        let (d, h): (Vec<f64>, Vec<i8>) = s.iter().copied().unzip();
        pairwise_accuracy(&d, &h).ok()
    };
    let acc_stat = |s: &[(f64, bool)]| {
        let (v, l): (Vec<f64>, Vec<bool>) = s.iter().copied().unzip();
        acceptability_delta(&v, &l).ok()
    };

    let mut rows = Vec::new();
    for &m in table.metrics() {
        let sa = table.similarities(m, a);
        let sb = table.similarities(m, b);
        let pairs: Vec<(f64, i8)> = signed.iter().map(|&(i, h)| (sa[i] - sb[i], h)).collect();
        let pa = pa_stat(&pairs).expect("signed items exist");
        let pa_ci = bootstrap_ci(&pairs, pa_stat, bootstrap_b, 0.95, derive_seed(seed, &format!("pa/{m}")));
        let scored: Vec<(f64, bool)> = accept
            .iter()
            .map(|&(i, is_a, ok)| (if is_a { sa[i] } else { sb[i] }, ok))
            .collect();
        let ad = acc_stat(&scored).expect("both classes present");
        let ad_ci = bootstrap_ci(&scored, acc_stat, bootstrap_b, 0.95, derive_seed(seed, &format!("ad/{m}")));
        rows.push(MetaRow {
            name: m.to_string(),
            pairwise_accuracy: Estimate::new(pa, pa_ci, RANDOM_PA),
            acceptability_delta: Estimate::new(ad, ad_ci, RANDOM_ACCEPTABILITY_DELTA),
        });
    }

    let human: Vec<(f64, bool)> = labels.iter().map(|&l| (if l { 1.0 } else { 0.0 }, l)).collect();
    let hum_ad = acc_stat(&human).expect("both classes present");
    let hum_ci = bootstrap_ci(&human, acc_stat, bootstrap_b, 0.95, derive_seed(seed, "ad/HUM"));
    rows.push(MetaRow {
        name: "HUM".into(),
        pairwise_accuracy: Estimate::new(1.0, Some((1.0, 1.0)), RANDOM_PA),
        acceptability_delta: Estimate::new(hum_ad, hum_ci, RANDOM_ACCEPTABILITY_DELTA),
    });
    rows.push(MetaRow {
        name: "RAND".into(),
        pairwise_accuracy: Estimate::new(RANDOM_PA, None, RANDOM_PA),
        acceptability_delta: Estimate::new(RANDOM_ACCEPTABILITY_DELTA, None, RANDOM_ACCEPTABILITY_DELTA),
    });

    Ok(MetaEvalReport {
        provenance: None,
        parser_a: a.to_string(),
        parser_b: b.to_string(),
        signed_items: signed.len(),
        acceptable: n_ok,
        unacceptable: labels.len() - n_ok,
        bootstrap_resamples: bootstrap_b,
        rows,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Provenance>,
    pub metrics: Vec<MetricId>,
    /// Number of scored pairs per metric column.
    pub samples: usize,
    /// `None` where a column is constant.
    pub matrix: Vec<Vec<Option<f64>>>,
}

/// Spearman matrix over all (parser, item) scores in the table.
pub fn correlation_report(table: &ScoreTable) -> Result<CorrelationReport, StatsError> {
    let columns: Vec<Vec<f64>> = table
        .metrics()
        .iter()
        .map(|&m| {
            table
                .parsers()
                .iter()
                .flat_map(|p| table.similarities(m, p))
                .collect()
        })
        .collect();
    let samples = columns.first().map_or(0, Vec::len);
    if samples < 3 {
        return Err(StatsError::LengthMismatch(samples, 3));
    }
    Ok(CorrelationReport {
        provenance: None,
        metrics: table.metrics().to_vec(),
        samples,
        matrix: spearman_matrix(&columns),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LengthSeries {
    /// `metric:parser` or `human:parser`.
    pub name: String,
    pub buckets: Vec<LengthBucket>,
}

fn sentence_lengths(corpus: &EvalCorpus) -> Result<Vec<usize>, StatsError> {
    corpus
        .items()
        .iter()
        .map(|it| {
            it.sentence
                .as_deref()
                .map(sentence_length)
                .ok_or_else(|| StatsError::MissingSentence(it.id.clone()))
        })
        .collect()
}

/// Mean score per sentence length for each (metric, parser), and mean
/// acceptability per length for each parser when labels are given.
pub fn length_series(
    corpus: &EvalCorpus,
    table: &ScoreTable,
    judgments: Option<&HumanJudgments>,
) -> Result<Vec<LengthSeries>, StatsError> {
    let lengths = sentence_lengths(corpus)?;
    let mut out = Vec::new();
    for &m in table.metrics() {
        for p in table.parsers() {
            out.push(LengthSeries {
                name: format!("{m}:{p}"),
                buckets: length_buckets(&lengths, &table.similarities(m, p), LENGTH_CAP)?,
            });
        }
    }
    if let Some(h) = judgments {
        let parsers = table.parsers();
        for (k, p) in parsers.iter().enumerate() {
            let mut lens = Vec::new();
            let mut vals = Vec::new();
            for ((id, parser), &ok) in &h.acceptability {
                let alias = match k {
                    0 => "a",
                    1 => "b",
                    _ => "",
                };
                if parser != p && parser != alias {
                    continue;
                }
                let idx = corpus.position(id).ok_or_else(|| StatsError::UnknownId(id.clone()))?;
                lens.push(lengths[idx]);
                vals.push(if ok { 1.0 } else { 0.0 });
            }
            if !lens.is_empty() {
                out.push(LengthSeries {
                    name: format!("human:{p}"),
                    buckets: length_buckets(&lens, &vals, LENGTH_CAP)?,
                });
            }
        }
    }
    Ok(out)
}

fn entry_header(out: &mut String, i: usize, e: &AmrEntry) {
    if i > 0 {
        out.push('\n');
    }
    if let Some(id) = &e.id {
        let _ = writeln!(out, "# ::id {id}");
    }
}

/// Sorted triples of every graph, one per line, blank line between graphs.
pub fn dump_triples(entries: &[AmrEntry]) -> String {
    let mut out = String::new();
    for (i, e) in entries.iter().enumerate() {
        entry_header(&mut out, i, e);
        for t in to_triples(&e.graph) {
            let _ = writeln!(out, "{t}");
        }
    }
    out
}

/// Sorted triples after the edge-to-node transform.
pub fn dump_e2n(entries: &[AmrEntry]) -> String {
    let mut out = String::new();
    for (i, e) in entries.iter().enumerate() {
        entry_header(&mut out, i, e);
        for t in to_triples(&edge_to_node_transform(&e.graph)) {
            let _ = writeln!(out, "{t}");
        }
    }
    out
}

/// `count<TAB>gram` lines for the k-grams of every graph.
pub fn dump_kgrams(entries: &[AmrEntry], k: usize) -> String {
    let mut out = String::new();
    for (i, e) in entries.iter().enumerate() {
        entry_header(&mut out, i, e);
        for (gram, count) in kgram_bag(&e.graph, k) {
            let _ = writeln!(out, "{count}\t{gram}");
        }
    }
    out
}
