//! Seeded Monte Carlo simulation of singlet trials.
//!
//! # Reproducibility contract
//!
//! - Generator: ChaCha with 8 rounds (`rand_chacha::ChaCha8Rng`), seeded
//!   through `SeedableRng::seed_from_u64`, which expands the 64-bit seed with
//!   PCG32. Both algorithms are fixed and platform independent.
//! - Work is cut into batches of [`BATCH_SIZE`] trials (the last batch may be
//!   short). Batch `i` draws from its own generator seeded with
//!   [`derive_seed`]`(master, i)`.
//! - Batches report integer counts that are summed, so the pooled result does
//!   not depend on how batches are scheduled across threads.
//!
//! `derive_seed` is the SplitMix64 output function applied to
//! `master + (i + 1) * 0x9E3779B97F4A7C15` (wrapping arithmetic).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bell::ChshConfig;
use crate::eprb::{p_discrete, TickTime};
use crate::spin::angle_between;
use crate::{Error, Result};

/// Generator used for every seeded stream in the crate.
pub type SimRng = ChaCha8Rng;

/// Trials per independently seeded batch.
pub const BATCH_SIZE: u64 = 1 << 16;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// Seed for sub-stream `index` of `master`.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master.wrapping_add(index.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn rng_from_seed(seed: u64) -> SimRng {
    SimRng::seed_from_u64(seed)
}

/// Welford accumulator for mean and sample variance.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RunningStats {
    count: u64,
    mean: f64,
    m2: f64,
}

impl RunningStats {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    /// Pools two accumulators (Chan et al. parallel update).
    pub fn merge(&mut self, other: &RunningStats) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = *other;
            return;
        }
        let n = (self.count + other.count) as f64;
        let delta = other.mean - self.mean;
        self.mean += delta * other.count as f64 / n;
        self.m2 += other.m2 + delta * delta * self.count as f64 * other.count as f64 / n;
        self.count += other.count;
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Sample variance with the `n - 1` denominator; zero for fewer than two samples.
    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            (self.m2 / (self.count - 1) as f64).max(0.0)
        }
    }

    pub fn stderr(&self) -> f64 {
        if self.count == 0 {
            0.0
        } else {
            (self.variance() / self.count as f64).sqrt()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    fn flipped(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TrialOutcome {
    pub sigma1: Sign,
    pub sigma2: Sign,
}

impl TrialOutcome {
    pub fn product(&self) -> i8 {
        self.sigma1.value() * self.sigma2.value()
    }
}

/// One singlet trial: `σ1` is a fair coin, and `σ2` agrees with it with
/// probability [`p_discrete`]`(θ, n)`.
pub fn sample_pair<R: Rng + ?Sized>(theta: f64, n: TickTime, rng: &mut R) -> TrialOutcome {
    let sigma1 = if rng.random_bool(0.5) { Sign::Plus } else { Sign::Minus };
    let agree = rng.random_bool(p_discrete(theta, n));
    let sigma2 = if agree { sigma1 } else { sigma1.flipped() };
    TrialOutcome { sigma1, sigma2 }
}

/// Monte Carlo estimate with its standard error.
///
/// `stderr` is the sample standard deviation over `sqrt(trials)`, where
/// `trials` counts the samples entering the average. For combined statistics
/// (CHSH) the per-term errors are added in quadrature and `trials` is the
/// total number of simulated pairs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EstimateReport {
    pub estimate: f64,
    pub stderr: f64,
    pub trials: u64,
}

/// Integer tallies from one batch. Summing tallies is exact and order free.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
struct Tally {
    trials: u64,
    first_plus: u64,
    both_plus: u64,
    /// Σ σ1σ2
    product_sum: i64,
}

impl std::ops::Add for Tally {
    type Output = Tally;

    fn add(self, o: Tally) -> Tally {
        Tally {
            trials: self.trials + o.trials,
            first_plus: self.first_plus + o.first_plus,
            both_plus: self.both_plus + o.both_plus,
            product_sum: self.product_sum + o.product_sum,
        }
    }
}

fn run_trials(theta: f64, n: TickTime, trials: u64, seed: u64) -> Tally {
    let batches = trials.div_ceil(BATCH_SIZE);
    (0..batches)
        .into_par_iter()
        .map(|i| {
            let len = BATCH_SIZE.min(trials - i * BATCH_SIZE);
            let mut rng = rng_from_seed(derive_seed(seed, i));
            let mut t = Tally {
                trials: len,
                ..Tally::default()
            };
            for _ in 0..len {
                let o = sample_pair(theta, n, &mut rng);
                if o.sigma1 == Sign::Plus {
                    t.first_plus += 1;
                    if o.sigma2 == Sign::Plus {
                        t.both_plus += 1;
                    }
                }
                t.product_sum += i64::from(o.product());
            }
            t
        })
        .reduce(Tally::default, |a, b| a + b)
}

/// Mean and standard error of a 0/1 sample with `k` ones out of `n`.
fn bernoulli_report(ones: u64, n: u64) -> EstimateReport {
    let (k, nf) = (ones as f64, n as f64);
    let mean = k / nf;
    let var = if n < 2 { 0.0 } else { (k - k * mean) / (nf - 1.0) };
    EstimateReport {
        estimate: mean,
        stderr: (var.max(0.0) / nf).sqrt(),
        trials: n,
    }
}

/// Mean and standard error of a ±1 sample with sum `sum` over `n` draws.
fn sign_report(sum: i64, n: u64) -> EstimateReport {
    let (s, nf) = (sum as f64, n as f64);
    let mean = s / nf;
    // Σx² = n for ±1 values
    let var = if n < 2 { 0.0 } else { (nf - s * mean) / (nf - 1.0) };
    EstimateReport {
        estimate: mean,
        stderr: (var.max(0.0) / nf).sqrt(),
        trials: n,
    }
}

/// Conditional-frequency estimate of `P(σ2 = + | σ1 = +)`.
///
/// Only trials with `σ1 = +` enter the average, so the report's `trials` is
/// the number of such conditioning events. Statistically the estimate lies
/// within four standard errors of [`p_discrete`] with probability about
/// `1 - 6e-5`; that is a coverage statement, not a hard bound.
pub fn estimate_probability(theta: f64, n: TickTime, trials: u64, seed: u64) -> Result<EstimateReport> {
    if trials == 0 {
        return Err(Error::domain("trials must be at least 1"));
    }
    let tally = run_trials(theta, n, trials, seed);
    if tally.first_plus == 0 {
        return Err(Error::InsufficientData(format!(
            "no trial out of {trials} had sigma1 = +1"
        )));
    }
    Ok(bernoulli_report(tally.both_plus, tally.first_plus))
}

/// Joint-frequency estimate of `E = ⟨σ1 σ2⟩`.
pub fn estimate_correlation(theta: f64, n: TickTime, trials: u64, seed: u64) -> Result<EstimateReport> {
    if trials == 0 {
        return Err(Error::domain("trials must be at least 1"));
    }
    let tally = run_trials(theta, n, trials, seed);
    Ok(sign_report(tally.product_sum, tally.trials))
}

/// Monte Carlo CHSH statistic.
///
/// The four correlations `(a,b), (a,b'), (a',b), (a',b')` are estimated from
/// independent blocks seeded with `derive_seed(seed, k)` for `k = 0..4`.
pub fn estimate_chsh(config: &ChshConfig, n: TickTime, trials_per_pair: u64, seed: u64) -> Result<EstimateReport> {
    if trials_per_pair == 0 {
        return Err(Error::domain("trials per pair must be at least 1"));
    }
    let pairs = config.pairs();
    let terms = pairs
        .iter()
        .enumerate()
        .map(|(k, (x, y))| estimate_correlation(angle_between(x, y), n, trials_per_pair, derive_seed(seed, k as u64)))
        .collect::<Result<Vec<_>>>()?;
    let s = (terms[0].estimate - terms[1].estimate).abs() + (terms[2].estimate + terms[3].estimate).abs();
    let stderr = terms.iter().map(|t| t.stderr * t.stderr).sum::<f64>().sqrt();
    Ok(EstimateReport {
        estimate: s,
        stderr,
        trials: 4 * trials_per_pair,
    })
}
