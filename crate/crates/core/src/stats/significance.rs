use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{Binomial, Discrete};

use super::{derive_seed, StatsError};

/// Relative slack when collecting outcomes "as extreme as" the observed one.
const PMF_SLACK: f64 = 1e-7;

/// Two-sided exact binomial test: total probability of outcomes no more
/// likely than `wins` under `Binomial(n, p0)`.
pub fn binomial_test(wins: u64, n: u64, p0: f64) -> Result<f64, StatsError> {
    if n == 0 {
        return Err(StatsError::ZeroTrials);
    }
    if wins > n {
        return Err(StatsError::TooManyWins { wins, n });
    }
    let dist = Binomial::new(p0, n).expect("p0 in [0, 1]");
    let observed = dist.pmf(wins);
    let cutoff = observed * (1.0 + PMF_SLACK);
    let mut p = 0.0;
    let mut excluded = false;
    for k in 0..=n {
        let q = dist.pmf(k);
        if q <= cutoff {
            p += q;
        } else {
            excluded = true;
        }
    }
    Ok(if excluded { p.min(1.0) } else { 1.0 })
}

/// How metric ties enter the significance test on preference counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum TiesMode {
    /// Test the tie-split count `pA`, rounded to the nearest integer, over all items.
    #[default]
    Split,
    /// Test strict wins of A among items without a tie.
    Exclude,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BinomialResult {
    pub ties: TiesMode,
    pub wins: u64,
    pub trials: u64,
    pub p_value: Option<f64>,
}

/// Binomial test of A's preference count against chance.
pub fn preference_test(a: &[f64], b: &[f64], ties: TiesMode) -> Result<BinomialResult, StatsError> {
    let (pa, _) = super::preference_counts(a, b)?;
    let (wins, trials) = match ties {
        TiesMode::Split => (pa.round() as u64, a.len() as u64),
        TiesMode::Exclude => {
            let strict_a = a.iter().zip(b).filter(|(x, y)| x > y).count() as u64;
            let decided = a.iter().zip(b).filter(|(x, y)| x != y).count() as u64;
            (strict_a, decided)
        }
    };
    let p_value = match binomial_test(wins, trials, 0.5) {
        Ok(p) => Some(p),
        Err(StatsError::ZeroTrials) => None,
        Err(e) => return Err(e),
    };
    Ok(BinomialResult {
        ties,
        wins,
        trials,
        p_value,
    })
}

/// Linear-interpolation quantile of sorted data.
fn quantile(sorted: &[f64], q: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * q;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Percentile bootstrap interval for `statistic` over `b` resamples.
///
/// Replicate `r` draws from its own generator seeded by `(seed, r)`, so the
/// result is independent of thread scheduling. Resamples on which the
/// statistic is undefined (`None`) are dropped; `None` is returned when
/// every resample is undefined.
pub fn bootstrap_ci<T, F>(data: &[T], statistic: F, b: usize, level: f64, seed: u64) -> Option<(f64, f64)>
where
    T: Clone + Send + Sync,
    F: Fn(&[T]) -> Option<f64> + Sync,
{
    if data.is_empty() || b == 0 {
        return None;
    }
    let mut stats: Vec<f64> = (0..b)
        .into_par_iter()
        .filter_map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, &format!("replicate/{r}")));
            let sample: Vec<T> = (0..data.len())
                .map(|_| data[rng.random_range(0..data.len())].clone())
                .collect();
            statistic(&sample)
        })
        .collect();
    if stats.is_empty() {
        return None;
    }
    stats.sort_by(f64::total_cmp);
    let alpha = (1.0 - level) / 2.0;
    Some((quantile(&stats, alpha), quantile(&stats, 1.0 - alpha)))
}
