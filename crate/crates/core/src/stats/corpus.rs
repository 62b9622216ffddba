use std::collections::{BTreeMap, HashMap, HashSet};

use serde::Serialize;

use super::StatsError;
use crate::penman::{AmrEntry, AmrGraph};

/// One evaluation item: a gold graph and one candidate per parser.
#[derive(Debug, Clone)]
pub struct EvalItem {
    pub id: String,
    pub sentence: Option<String>,
    pub gold: AmrGraph,
    pub candidates: BTreeMap<String, AmrGraph>,
}

/// How candidate entries were matched to gold entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Alignment {
    ById,
    Positional,
}

#[derive(Debug, Clone)]
pub struct EvalCorpus {
    items: Vec<EvalItem>,
    parsers: Vec<String>,
}

impl EvalCorpus {
    /// Checks that ids are unique and every item has the same parser set.
    pub fn new(items: Vec<EvalItem>) -> Result<Self, StatsError> {
        let parsers: Vec<String> = items
            .first()
            .map(|i| i.candidates.keys().cloned().collect())
            .unwrap_or_default();
        let mut seen = HashSet::new();
        for item in &items {
            if !seen.insert(item.id.as_str()) {
                return Err(StatsError::DuplicateId(item.id.clone()));
            }
            for p in &parsers {
                if !item.candidates.contains_key(p) {
                    return Err(StatsError::MissingCandidate {
                        id: item.id.clone(),
                        parser: p.clone(),
                    });
                }
            }
            if let Some(extra) = item.candidates.keys().find(|k| !parsers.contains(k)) {
                return Err(StatsError::MissingCandidate {
                    id: items[0].id.clone(),
                    parser: extra.clone(),
                });
            }
        }
        Ok(EvalCorpus { items, parsers })
    }

    /// Pairs gold entries with each parser's entries: by `::id` when every
    /// entry carries one, otherwise by position.
    pub fn align(
        gold: Vec<AmrEntry>,
        candidates: Vec<(String, Vec<AmrEntry>)>,
    ) -> Result<(Self, Alignment), StatsError> {
        let all_ids = gold.iter().all(|e| e.id.is_some())
            && candidates.iter().all(|(_, es)| es.iter().all(|e| e.id.is_some()));
        let mode = if all_ids {
            Alignment::ById
        } else {
            Alignment::Positional
        };
        let mut items: Vec<EvalItem> = gold
            .into_iter()
            .enumerate()
            .map(|(i, e)| EvalItem {
                id: e.id.unwrap_or_else(|| (i + 1).to_string()),
                sentence: e.sentence,
                gold: e.graph,
                candidates: BTreeMap::new(),
            })
            .collect();
        let index: HashMap<String, usize> = items
            .iter()
            .enumerate()
            .map(|(i, it)| (it.id.clone(), i))
            .collect();
        if index.len() != items.len() {
            let mut seen = HashSet::new();
            let dup = items.iter().find(|it| !seen.insert(&it.id)).unwrap();
            return Err(StatsError::DuplicateId(dup.id.clone()));
        }
        for (parser, entries) in candidates {
            if mode == Alignment::Positional && entries.len() != items.len() {
                return Err(StatsError::CountMismatch {
                    gold: items.len(),
                    candidate: entries.len(),
                    parser,
                });
            }
            for (pos, e) in entries.into_iter().enumerate() {
                let slot = match mode {
                    Alignment::Positional => pos,
                    Alignment::ById => {
                        let id = e.id.as_deref().unwrap_or_default();
                        *index.get(id).ok_or_else(|| StatsError::UnknownId(id.to_string()))?
                    }
                };
                let item = &mut items[slot];
                if item.sentence.is_none() {
                    item.sentence = e.sentence;
                }
                if item.candidates.insert(parser.clone(), e.graph).is_some() {
                    return Err(StatsError::DuplicateId(item.id.clone()));
                }
            }
        }
        Ok((EvalCorpus::new(items)?, mode))
    }

    pub fn items(&self) -> &[EvalItem] {
        &self.items
    }

    /// Parser ids in sorted order.
    pub fn parsers(&self) -> &[String] {
        &self.parsers
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn position(&self, id: &str) -> Option<usize> {
        self.items.iter().position(|i| i.id == id)
    }

    pub fn has_parser(&self, parser: &str) -> bool {
        self.parsers.iter().any(|p| p == parser)
    }
}
