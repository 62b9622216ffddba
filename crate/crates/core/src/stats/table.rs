use std::collections::BTreeMap;

use rayon::prelude::*;

use super::{EvalCorpus, StatsError};
use crate::metrics::{MetricId, MetricScore, Scorer};

/// Per-item scores for every (metric, parser) combination, in corpus order.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreTable {
    metrics: Vec<MetricId>,
    parsers: Vec<String>,
    ids: Vec<String>,
    cells: BTreeMap<(MetricId, String), Vec<MetricScore>>,
}

impl ScoreTable {
    /// Scores every candidate of the listed parsers against gold, in parallel
    /// over (metric, parser, item).
    pub fn build(
        corpus: &EvalCorpus,
        scorer: &Scorer,
        metrics: &[MetricId],
        parsers: &[String],
    ) -> Result<Self, StatsError> {
        if corpus.is_empty() {
            return Err(StatsError::EmptyCorpus);
        }
        if let Some(p) = parsers.iter().find(|p| !corpus.has_parser(p)) {
            return Err(StatsError::UnknownParser(p.clone()));
        }
        let n = corpus.len();
        let jobs: Vec<(MetricId, &String, usize)> = metrics
            .iter()
            .flat_map(|&m| parsers.iter().flat_map(move |p| (0..n).map(move |i| (m, p, i))))
            .collect();
        let scores: Vec<MetricScore> = jobs
            .par_iter()
            .map(|&(m, p, i)| {
                let item = &corpus.items()[i];
                scorer.score(m, &item.candidates[p], &item.gold)
            })
            .collect();
        let mut cells = BTreeMap::new();
        let mut it = scores.into_iter();
        for &m in metrics {
            for p in parsers {
                cells.insert((m, p.clone()), it.by_ref().take(n).collect());
            }
        }
        Ok(ScoreTable {
            metrics: metrics.to_vec(),
            parsers: parsers.to_vec(),
            ids: corpus.items().iter().map(|i| i.id.clone()).collect(),
            cells,
        })
    }

    pub fn metrics(&self) -> &[MetricId] {
        &self.metrics
    }

    pub fn parsers(&self) -> &[String] {
        &self.parsers
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn scores(&self, metric: MetricId, parser: &str) -> &[MetricScore] {
        self.cells
            .get(&(metric, parser.to_string()))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    pub fn similarities(&self, metric: MetricId, parser: &str) -> Vec<f64> {
        self.scores(metric, parser).iter().map(|s| s.similarity).collect()
    }

    /// Applies `f` to every similarity, keeping components. For checking
    /// that rank statistics ignore monotone rescaling.
    pub fn map_similarities(&self, f: impl Fn(f64) -> f64) -> ScoreTable {
        let mut out = self.clone();
        for v in out.cells.values_mut() {
            for s in v {
                s.similarity = f(s.similarity);
            }
        }
        out
    }
}
