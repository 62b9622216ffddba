use std::collections::BTreeMap;

use serde::Serialize;

use super::StatsError;

/// Sentences longer than this share the last bucket.
pub const LENGTH_CAP: usize = 55;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LengthBucket {
    pub bucket: usize,
    pub mean: f64,
    pub count: usize,
}

/// Whitespace token count.
pub fn sentence_length(sentence: &str) -> usize {
    sentence.split_whitespace().count()
}

/// Per-length means of `values`, with lengths above `cap` pooled into `cap`.
pub fn length_buckets(lengths: &[usize], values: &[f64], cap: usize) -> Result<Vec<LengthBucket>, StatsError> {
    if lengths.len() != values.len() {
        return Err(StatsError::LengthMismatch(lengths.len(), values.len()));
    }
    let mut acc: BTreeMap<usize, (f64, usize)> = BTreeMap::new();
    for (&len, &v) in lengths.iter().zip(values) {
        let slot = acc.entry(len.min(cap)).or_insert((0.0, 0));
        slot.0 += v;
        slot.1 += 1;
    }
    Ok(acc
        .into_iter()
        .map(|(bucket, (sum, count))| LengthBucket {
            bucket,
            mean: sum / count as f64,
            count,
        })
        .collect())
}
