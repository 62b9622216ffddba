use super::StatsError;

/// Wins of A and B over paired scores; each tie adds 0.5 to both sides.
pub fn preference_counts(a: &[f64], b: &[f64]) -> Result<(f64, f64), StatsError> {
    if a.len() != b.len() {
        return Err(StatsError::LengthMismatch(a.len(), b.len()));
    }
    let (mut pa, mut pb) = (0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        if x > y {
            pa += 1.0;
        } else if y > x {
            pb += 1.0;
        } else {
            pa += 0.5;
            pb += 0.5;
        }
    }
    Ok((pa, pb))
}

/// Share of human-signed items where `delta * pref > 0`.
///
/// `deltas[i]` is `m(x, g) - m(y, g)`; `prefs[i]` is +1 when the human
/// preferred `x`, -1 for `y`, 0 for no preference (skipped). A metric tie
/// on a signed item counts as a miss.
pub fn pairwise_accuracy(deltas: &[f64], prefs: &[i8]) -> Result<f64, StatsError> {
    if deltas.len() != prefs.len() {
        return Err(StatsError::LengthMismatch(deltas.len(), prefs.len()));
    }
    let mut signed = 0usize;
    let mut hits = 0usize;
    for (&d, &h) in deltas.iter().zip(prefs) {
        if h == 0 {
            continue;
        }
        signed += 1;
        if d * h as f64 > 0.0 {
            hits += 1;
        }
    }
    if signed == 0 {
        return Err(StatsError::NoSignedItems);
    }
    Ok(hits as f64 / signed as f64)
}

/// 1-based ascending ranks; tied values share their average rank.
pub fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    let mut ranks = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        let avg = (start + end + 1) as f64 / 2.0;
        for &i in &order[start..end] {
            ranks[i] = avg;
        }
        start = end;
    }
    ranks
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

/// Median rank of acceptable parses minus median rank of unacceptable ones,
/// ranking all scores together.
pub fn acceptability_delta(scores: &[f64], acceptable: &[bool]) -> Result<f64, StatsError> {
    if scores.len() != acceptable.len() {
        return Err(StatsError::LengthMismatch(scores.len(), acceptable.len()));
    }
    let ranks = average_ranks(scores);
    let (pos, neg): (Vec<_>, Vec<_>) = ranks.iter().zip(acceptable).partition(|(_, &ok)| ok);
    if pos.is_empty() {
        return Err(StatsError::EmptyClass("acceptable"));
    }
    if neg.is_empty() {
        return Err(StatsError::EmptyClass("unacceptable"));
    }
    let pos = pos.into_iter().map(|(r, _)| *r).collect();
    let neg = neg.into_iter().map(|(r, _)| *r).collect();
    Ok(median(pos) - median(neg))
}

/// Spearman's rho with average ranks; `None` when either side is constant
/// or fewer than two values are given.
pub fn spearman(x: &[f64], y: &[f64]) -> Option<f64> {
    if x.len() != y.len() || x.len() < 2 {
        return None;
    }
    let rx = average_ranks(x);
    let ry = average_ranks(y);
    let n = x.len() as f64;
    let mx = rx.iter().sum::<f64>() / n;
    let my = ry.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in rx.iter().zip(&ry) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        return None;
    }
    Some((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

/// Pairwise Spearman over score columns. Symmetric; the diagonal is 1
/// unless the column is constant.
pub fn spearman_matrix(columns: &[Vec<f64>]) -> Vec<Vec<Option<f64>>> {
    let k = columns.len();
    let mut m = vec![vec![None; k]; k];
    for i in 0..k {
        let constant = spearman(&columns[i], &columns[i]).is_none();
        m[i][i] = if constant { None } else { Some(1.0) };
        for j in i + 1..k {
            let r = spearman(&columns[i], &columns[j]);
            m[i][j] = r;
            m[j][i] = r;
        }
    }
    m
}
