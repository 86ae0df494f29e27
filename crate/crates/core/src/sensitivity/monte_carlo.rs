use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::formula::{lift_cost_model, CostTarget};
use super::UncertainParam;
use crate::error::{Error, Result};

pub const DEFAULT_SAMPLES: usize = 10_000;

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct McSummary {
    pub sample_count: usize,
    pub seed: u64,
    pub mean: f64,
    pub std_dev: f64,
    pub p05: f64,
    pub p50: f64,
    pub p95: f64,
    pub min: f64,
    pub max: f64,
}

/// Sample `index` draws from its own ChaCha stream keyed by `(seed, index)`,
/// so the sample set does not depend on evaluation order.
fn draw(target: CostTarget, params: &BTreeMap<String, UncertainParam>, seed: u64, index: u64) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let values: BTreeMap<&str, f64> = params
        .iter()
        .map(|(name, p)| {
            let v = p.distribution.sample(p.interval.lo(), p.interval.hi(), &mut rng);
            (name.as_str(), v)
        })
        .collect();
    let get = |name: &str| values.get(name).copied();
    target.evaluate::<f64>(&get)
}

/// Evaluates `n_samples` draws, in sample-index order.
pub fn monte_carlo_samples(
    target: CostTarget,
    params: &BTreeMap<String, UncertainParam>,
    n_samples: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    if n_samples == 0 {
        return Err(Error::NoSamples);
    }
    // Validates names, units and divisors once before sampling.
    lift_cost_model(target, params)?;
    (0..n_samples as u64)
        .into_par_iter()
        .map(|i| draw(target, params, seed, i))
        .collect()
}

/// Runs the simulation on the global thread pool.
pub fn monte_carlo(
    target: CostTarget,
    params: &BTreeMap<String, UncertainParam>,
    n_samples: usize,
    seed: u64,
) -> Result<McSummary> {
    let samples = monte_carlo_samples(target, params, n_samples, seed)?;
    Ok(summarize(&samples, seed))
}

/// Same as [`monte_carlo`] on a dedicated pool of `workers` threads.
pub fn monte_carlo_with_workers(
    target: CostTarget,
    params: &BTreeMap<String, UncertainParam>,
    n_samples: usize,
    seed: u64,
    workers: usize,
) -> Result<McSummary> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?;
    pool.install(|| monte_carlo(target, params, n_samples, seed))
}

fn quantile(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

pub(crate) fn summarize(samples: &[f64], seed: u64) -> McSummary {
    let n = samples.len();
    let mean = samples.iter().sum::<f64>() / n as f64;
    let var = if n > 1 {
        samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64
    } else {
        0.0
    };
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    McSummary {
        sample_count: n,
        seed,
        mean,
        std_dev: var.sqrt(),
        p05: quantile(&sorted, 0.05),
        p50: quantile(&sorted, 0.50),
        p95: quantile(&sorted, 0.95),
        min: sorted[0],
        max: sorted[n - 1],
    }
}
