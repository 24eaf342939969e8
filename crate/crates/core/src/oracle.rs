//! Statistical-query access to an unknown target distribution.
//!
//! A query is a table `f : X -> [0, 1]`; the answer estimates `E_p[f]` and
//! is clamped to `[0, 1]`. Four backends are available:
//!
//! | backend | answer |
//! |---|---|
//! | `Exact` | `E_p[f]` exactly (needs `p`, for tests and ground truth) |
//! | `FreshSample` | mean of `f` over a new block of draws per query |
//! | `NaiveReuse` | mean of `f` over one shared sample |
//! | `GaussianNoise` | shared-sample mean plus centred Gaussian noise |
//!
//! Every oracle carries a [`QueryBudget`]; the `(k+1)`-th query fails.

use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::distributions::{expectation, DistributionError, FiniteDistribution, SampleBatch, Sampler, ValueTable};
use crate::rational::{clamp_unit, from_f64, Rational};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("query budget of {k} exhausted")]
    BudgetExceeded { k: usize },
    #[error("invalid budget: {0}")]
    InvalidBudget(String),
    #[error(transparent)]
    Distribution(#[from] DistributionError),
    #[error("shared sample is empty")]
    EmptySample,
    #[error("noise scale must be finite and nonnegative, got {0}")]
    InvalidSigma(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QueryBudget {
    pub k: usize,
    pub tau: f64,
    pub delta: f64,
}

impl QueryBudget {
    pub fn new(k: usize, tau: f64, delta: f64) -> Result<Self, OracleError> {
        if k == 0 {
            return Err(OracleError::InvalidBudget("k must be at least 1".into()));
        }
        if !(tau > 0.0 && tau < 1.0) {
            return Err(OracleError::InvalidBudget(format!("tau = {tau} not in (0, 1)")));
        }
        if !(delta > 0.0 && delta < 1.0) {
            return Err(OracleError::InvalidBudget(format!("delta = {delta} not in (0, 1)")));
        }
        Ok(Self { k, tau, delta })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BackendKind {
    Exact,
    #[serde(rename = "fresh")]
    FreshSample,
    #[serde(rename = "reuse")]
    NaiveReuse,
    #[serde(rename = "gauss")]
    GaussianNoise,
}

#[derive(Debug, Clone)]
enum Backend {
    Exact(FiniteDistribution),
    FreshSample { sampler: Sampler, block: usize },
    NaiveReuse { counts: Vec<u64>, total: u64 },
    GaussianNoise { counts: Vec<u64>, total: u64, noise: Normal<f64> },
}

/// A budgeted statistical-query oracle. Single owner: queries are adaptive.
#[derive(Debug, Clone)]
pub struct StatOracle {
    backend: Backend,
    budget: QueryBudget,
    used: usize,
    drawn: usize,
    rng: ChaCha8Rng,
}

fn histogram(batch: &SampleBatch, domain_size: usize) -> Result<(Vec<u64>, u64), OracleError> {
    if batch.is_empty() {
        return Err(OracleError::EmptySample);
    }
    Ok((batch.histogram(domain_size)?, batch.len() as u64))
}

/// `sum_x count_x f(x) / total`. Query tables usually take only a few
/// distinct values, so counts are pooled per value before multiplying.
fn weighted_mean<'a>(pairs: impl Iterator<Item = (&'a Rational, u64)>, total: u64) -> Rational {
    const POOLED_VALUES: usize = 32;
    let mut pools: Vec<(&Rational, u64)> = Vec::new();
    let mut spill = Rational::zero();
    for (v, c) in pairs {
        if c == 0 || v.is_zero() {
            continue;
        }
        if let Some(slot) = pools.iter_mut().find(|slot| slot.0 == v) {
            slot.1 += c;
        } else if pools.len() < POOLED_VALUES {
            pools.push((v, c));
        } else {
            spill += v * Rational::from_integer(c.into());
        }
    }
    let sum: Rational = pools
        .into_iter()
        .map(|(v, c)| v * Rational::from_integer(c.into()))
        .sum::<Rational>()
        + spill;
    sum / Rational::from_integer(total.into())
}

fn histogram_mean(counts: &[u64], total: u64, f: &ValueTable) -> Rational {
    weighted_mean(f.values().iter().zip(counts.iter().copied()), total)
}

impl StatOracle {
    pub fn exact(p: FiniteDistribution, budget: QueryBudget) -> Self {
        Self::build(Backend::Exact(p), budget, 0, 0)
    }

    /// Draws a fresh block of `block` samples from `p` for every query.
    pub fn fresh(p: &FiniteDistribution, budget: QueryBudget, block: usize, seed: u64) -> Self {
        let block = block.max(1);
        Self::build(
            Backend::FreshSample {
                sampler: Sampler::new(p),
                block,
            },
            budget,
            0,
            seed,
        )
    }

    pub fn reuse(batch: &SampleBatch, domain_size: usize, budget: QueryBudget) -> Result<Self, OracleError> {
        let (counts, total) = histogram(batch, domain_size)?;
        Ok(Self::build(Backend::NaiveReuse { counts, total }, budget, total as usize, 0))
    }

    pub fn gaussian(
        batch: &SampleBatch,
        domain_size: usize,
        budget: QueryBudget,
        sigma: f64,
        seed: u64,
    ) -> Result<Self, OracleError> {
        if !(sigma.is_finite() && sigma >= 0.0) {
            return Err(OracleError::InvalidSigma(sigma));
        }
        let (counts, total) = histogram(batch, domain_size)?;
        let noise = Normal::new(0.0, sigma).map_err(|_| OracleError::InvalidSigma(sigma))?;
        Ok(Self::build(
            Backend::GaussianNoise { counts, total, noise },
            budget,
            total as usize,
            seed,
        ))
    }

    fn build(backend: Backend, budget: QueryBudget, drawn: usize, seed: u64) -> Self {
        Self {
            backend,
            budget,
            used: 0,
            drawn,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn kind(&self) -> BackendKind {
        match self.backend {
            Backend::Exact(_) => BackendKind::Exact,
            Backend::FreshSample { .. } => BackendKind::FreshSample,
            Backend::NaiveReuse { .. } => BackendKind::NaiveReuse,
            Backend::GaussianNoise { .. } => BackendKind::GaussianNoise,
        }
    }

    pub fn budget(&self) -> QueryBudget {
        self.budget
    }

    pub fn queries_used(&self) -> usize {
        self.used
    }

    pub fn remaining(&self) -> usize {
        self.budget.k - self.used
    }

    /// Total samples consumed so far (shared sample size for reuse backends).
    pub fn samples_drawn(&self) -> usize {
        self.drawn
    }

    pub fn answer(&mut self, f: &ValueTable) -> Result<Rational, OracleError> {
        if self.used >= self.budget.k {
            return Err(OracleError::BudgetExceeded { k: self.budget.k });
        }
        let raw = match &self.backend {
            Backend::Exact(p) => expectation(p, f)?,
            Backend::FreshSample { sampler, block } => {
                if f.len() != sampler.domain_size() {
                    return Err(DistributionError::TableLength {
                        len: f.len(),
                        domain_size: sampler.domain_size(),
                    }
                    .into());
                }
                let values = f.values();
                let rng = &mut self.rng;
                let mean = weighted_mean((0..*block).map(|_| (&values[sampler.draw(rng)], 1)), *block as u64);
                self.drawn += block;
                mean
            }
            Backend::NaiveReuse { counts, total } => {
                check_len(counts.len(), f)?;
                histogram_mean(counts, *total, f)
            }
            Backend::GaussianNoise { counts, total, noise } => {
                check_len(counts.len(), f)?;
                let z = noise.sample(&mut self.rng);
                histogram_mean(counts, *total, f) + from_f64(z)
            }
        };
        self.used += 1;
        Ok(clamp_unit(raw))
    }
}

fn check_len(expected: usize, f: &ValueTable) -> Result<(), OracleError> {
    if f.len() != expected {
        return Err(DistributionError::TableLength {
            len: f.len(),
            domain_size: expected,
        }
        .into());
    }
    Ok(())
}

/// Per-query block size for the fresh-sample backend:
/// `ceil(ln(2k/delta) / (2 tau^2))`, at least 1 (Hoeffding plus a union bound).
pub fn fresh_sample_size(budget: &QueryBudget) -> usize {
    let k = budget.k as f64;
    ((2.0 * k / budget.delta).ln() / (2.0 * budget.tau * budget.tau)).ceil().max(1.0) as usize
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MechanismFlavor {
    Infinite,
    Finite,
}

/// Advisory shared-sample size for noise-adding mechanisms, evaluating
/// their asymptotic rates with every hidden constant equal to 1 and natural
/// logarithms (`ln k` and `ln ln k` floored at 1):
///
/// * infinite domains: `sqrt(k ln ln k) ln(1/(tau delta))^{3/2} / tau^2`
/// * finite domains: `sqrt(ln |X|) ln k ln(1/(tau delta))^{3/2} / tau^3`
pub fn mechanism_sample_size(budget: &QueryBudget, domain_size: usize, flavor: MechanismFlavor) -> usize {
    let k = budget.k as f64;
    let tau = budget.tau;
    let log_k = k.ln().max(1.0);
    let loglog_k = k.ln().ln().max(1.0);
    let confidence = (1.0 / (tau * budget.delta)).ln().powf(1.5);
    let value = match flavor {
        MechanismFlavor::Infinite => (k * loglog_k).sqrt() * confidence / (tau * tau),
        MechanismFlavor::Finite => (domain_size.max(2) as f64).ln().sqrt() * log_k * confidence / tau.powi(3),
    };
    value.ceil().max(1.0) as usize
}
