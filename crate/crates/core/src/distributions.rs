//! Probability vectors over a finite, indexed domain.
//!
//! A [`FiniteDistribution`] is an immutable vector of exact rationals that are
//! nonnegative and sum to exactly one. Total variation is computed three ways
//! (half-L1, the supremum over events, and one minus the coupling overlap) so
//! the equivalences can be checked against each other.

use std::fmt;

use num_traits::{One, Signed, Zero};
use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::rational::{format_rational, parse_rational, to_f64, ParseRationalError, Rational};

/// Largest domain for which the subset-enumeration route is allowed.
pub const SUBSET_ORACLE_LIMIT: usize = 24;

/// Tolerance on the total mass of float-specified distributions.
pub const FLOAT_MASS_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DistributionError {
    #[error("distribution over an empty domain")]
    EmptyDomain,
    #[error("negative probability at index {index}")]
    Negative { index: usize },
    #[error("probabilities sum to {sum}, expected exactly 1")]
    NotNormalized { sum: String },
    #[error("domain sizes differ ({left} vs {right})")]
    DomainMismatch { left: usize, right: usize },
    #[error("domain of size {size} exceeds the enumeration limit {limit}")]
    DomainTooLarge { size: usize, limit: usize },
    #[error("empirical distribution of an empty batch")]
    EmptyBatch,
    #[error("draw {index} is outside a domain of size {domain_size}")]
    IndexOutOfRange { index: usize, domain_size: usize },
    #[error("function value at index {index} is outside [0, 1]")]
    ValueOutOfRange { index: usize },
    #[error("table has length {len}, domain has size {domain_size}")]
    TableLength { len: usize, domain_size: usize },
    #[error("mixture weights must be nonnegative and sum to 1")]
    WeightsNotOnSimplex,
    #[error("need at least one distribution")]
    NoParts,
    #[error("mixture has {weights} weights for {parts} parts")]
    WeightCount { weights: usize, parts: usize },
    #[error(transparent)]
    Parse(#[from] ParseRationalError),
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FiniteDistribution {
    probs: Vec<Rational>,
}

impl FiniteDistribution {
    pub fn new(probs: Vec<Rational>) -> Result<Self, DistributionError> {
        if probs.is_empty() {
            return Err(DistributionError::EmptyDomain);
        }
        if let Some(index) = probs.iter().position(|p| p.is_negative()) {
            return Err(DistributionError::Negative { index });
        }
        let sum: Rational = probs.iter().sum();
        if !sum.is_one() {
            return Err(DistributionError::NotNormalized {
                sum: format_rational(&sum),
            });
        }
        Ok(Self { probs })
    }

    /// Parses literals such as `"1/3"` or `"0.25"`.
    pub fn parse<S: AsRef<str>>(literals: &[S]) -> Result<Self, DistributionError> {
        let probs = literals
            .iter()
            .map(|s| parse_rational(s.as_ref()))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(probs)
    }

    /// Float-specified distribution: the mass must be within 1e-12 of one and
    /// is then renormalized exactly.
    pub fn from_f64(values: &[f64]) -> Result<Self, DistributionError> {
        if values.is_empty() {
            return Err(DistributionError::EmptyDomain);
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite() || *v < 0.0) {
            return Err(DistributionError::Negative { index });
        }
        let total: f64 = values.iter().sum();
        if (total - 1.0).abs() > FLOAT_MASS_TOLERANCE {
            return Err(DistributionError::NotNormalized {
                sum: total.to_string(),
            });
        }
        let exact: Vec<Rational> = values.iter().map(|v| crate::rational::from_f64(*v)).collect();
        let sum: Rational = exact.iter().sum();
        Self::new(exact.into_iter().map(|v| v / &sum).collect())
    }

    pub fn point_mass(domain_size: usize, index: usize) -> Self {
        assert!(index < domain_size, "point mass outside the domain");
        let probs = (0..domain_size)
            .map(|x| if x == index { Rational::one() } else { Rational::zero() })
            .collect();
        Self { probs }
    }

    pub fn uniform(domain_size: usize) -> Self {
        assert!(domain_size > 0, "uniform over an empty domain");
        let mass = Rational::new(1.into(), (domain_size as u64).into());
        Self {
            probs: vec![mass; domain_size],
        }
    }

    /// Normalizes nonnegative integer weights; useful for generating instances
    /// with small denominators.
    pub fn from_weights(weights: &[u64]) -> Result<Self, DistributionError> {
        let total: u64 = weights.iter().sum();
        if total == 0 {
            return Err(DistributionError::NotNormalized { sum: "0".into() });
        }
        Self::new(
            weights
                .iter()
                .map(|w| Rational::new((*w).into(), total.into()))
                .collect(),
        )
    }

    pub fn domain_size(&self) -> usize {
        self.probs.len()
    }

    pub fn probs(&self) -> &[Rational] {
        &self.probs
    }

    pub fn prob(&self, x: usize) -> &Rational {
        &self.probs[x]
    }

    pub fn to_f64_vec(&self) -> Vec<f64> {
        self.probs.iter().map(to_f64).collect()
    }

    /// Mass of the event `{x : event[x]}`.
    pub fn mass_of(&self, event: &[bool]) -> Rational {
        self.probs
            .iter()
            .zip(event)
            .filter(|(_, in_event)| **in_event)
            .map(|(p, _)| p)
            .sum()
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.probs.len()).filter(|x| !self.probs[*x].is_zero()).collect()
    }

    pub fn literals(&self) -> Vec<String> {
        self.probs.iter().map(format_rational).collect()
    }

    pub(crate) fn from_raw(probs: Vec<Rational>) -> Self {
        debug_assert!(probs.iter().all(|p| !p.is_negative()));
        debug_assert!(probs.iter().sum::<Rational>().is_one());
        Self { probs }
    }
}

impl fmt::Debug for FiniteDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.literals()).finish()
    }
}

/// A function `X -> [0, 1]` given by its values.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ValueTable(Vec<Rational>);

impl ValueTable {
    pub fn new(values: Vec<Rational>) -> Result<Self, DistributionError> {
        if let Some(index) = values
            .iter()
            .position(|v| v.is_negative() || *v > Rational::one())
        {
            return Err(DistributionError::ValueOutOfRange { index });
        }
        Ok(Self(values))
    }

    pub fn indicator(event: &[bool]) -> Self {
        Self(
            event
                .iter()
                .map(|b| if *b { Rational::one() } else { Rational::zero() })
                .collect(),
        )
    }

    pub fn constant(domain_size: usize, value: Rational) -> Result<Self, DistributionError> {
        Self::new(vec![value; domain_size])
    }

    pub fn values(&self) -> &[Rational] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub(crate) fn from_raw(values: Vec<Rational>) -> Self {
        Self(values)
    }
}

/// Vector of distances from one distribution to each candidate.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DistanceVector(Vec<Rational>);

impl DistanceVector {
    pub fn new(entries: Vec<Rational>) -> Self {
        Self(entries)
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![Rational::zero(); n])
    }

    pub fn entries(&self) -> &[Rational] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn shifted(&self, delta: &Rational) -> Self {
        Self(self.0.iter().map(|v| v + delta).collect())
    }

    /// Coordinatewise `self <= other`.
    pub fn dominated_by(&self, other: &DistanceVector) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn dot(&self, weights: &[Rational]) -> Rational {
        self.0.iter().zip(weights).map(|(a, b)| a * b).sum()
    }

    pub fn l1(&self) -> Rational {
        self.0.iter().map(|v| v.abs()).sum()
    }

    pub(crate) fn entries_mut(&mut self) -> &mut [Rational] {
        &mut self.0
    }
}

impl fmt::Debug for DistanceVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries(self.0.iter().map(format_rational))
            .finish()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleBatch {
    pub draws: Vec<usize>,
    pub source_seed: Option<u64>,
}

impl SampleBatch {
    pub fn len(&self) -> usize {
        self.draws.len()
    }

    pub fn is_empty(&self) -> bool {
        self.draws.is_empty()
    }

    pub fn concat(&self, other: &SampleBatch) -> SampleBatch {
        let mut draws = self.draws.clone();
        draws.extend_from_slice(&other.draws);
        SampleBatch {
            draws,
            source_seed: None,
        }
    }

    /// Occurrence count of every atom.
    pub fn histogram(&self, domain_size: usize) -> Result<Vec<u64>, DistributionError> {
        let mut counts = vec![0u64; domain_size];
        for &x in &self.draws {
            if x >= domain_size {
                return Err(DistributionError::IndexOutOfRange {
                    index: x,
                    domain_size,
                });
            }
            counts[x] += 1;
        }
        Ok(counts)
    }
}

fn check_domains(p: &FiniteDistribution, q: &FiniteDistribution) -> Result<(), DistributionError> {
    if p.domain_size() != q.domain_size() {
        return Err(DistributionError::DomainMismatch {
            left: p.domain_size(),
            right: q.domain_size(),
        });
    }
    Ok(())
}

/// Half the L1 distance.
pub fn total_variation(
    p: &FiniteDistribution,
    q: &FiniteDistribution,
) -> Result<Rational, DistributionError> {
    check_domains(p, q)?;
    Ok(tv_unchecked(p.probs(), q.probs()))
}

pub(crate) fn tv_unchecked(p: &[Rational], q: &[Rational]) -> Rational {
    // sum of positive parts equals half the L1 norm when both have mass one
    p.iter()
        .zip(q)
        .filter(|(a, b)| a > b)
        .map(|(a, b)| a - b)
        .sum()
}

/// Largest discrepancy `|p(A) - q(A)|` over all `2^|X|` events.
pub fn tv_subset_oracle(
    p: &FiniteDistribution,
    q: &FiniteDistribution,
) -> Result<Rational, DistributionError> {
    check_domains(p, q)?;
    let size = p.domain_size();
    if size > SUBSET_ORACLE_LIMIT {
        return Err(DistributionError::DomainTooLarge {
            size,
            limit: SUBSET_ORACLE_LIMIT,
        });
    }
    let diffs: Vec<Rational> = p.probs().iter().zip(q.probs()).map(|(a, b)| a - b).collect();
    let mut best = Rational::zero();
    for mask in 0u32..(1u32 << size) {
        let gap: Rational = (0..size)
            .filter(|x| mask & (1 << x) != 0)
            .map(|x| &diffs[x])
            .sum();
        let gap = gap.abs();
        if gap > best {
            best = gap;
        }
    }
    Ok(best)
}

/// `sum_x min(p(x), q(x))`, the success probability of an optimal coupling.
pub fn overlap(p: &FiniteDistribution, q: &FiniteDistribution) -> Result<Rational, DistributionError> {
    check_domains(p, q)?;
    Ok(p.probs()
        .iter()
        .zip(q.probs())
        .map(|(a, b)| if a < b { a.clone() } else { b.clone() })
        .sum())
}

/// Precomputed categorical sampler. Draws use a float image of the exact
/// probabilities.
#[derive(Clone, Debug)]
pub struct Sampler {
    index: WeightedIndex<f64>,
    domain_size: usize,
}

impl Sampler {
    pub fn new(p: &FiniteDistribution) -> Self {
        let index = WeightedIndex::new(p.to_f64_vec()).expect("a distribution has positive mass");
        Self {
            index,
            domain_size: p.domain_size(),
        }
    }

    pub fn domain_size(&self) -> usize {
        self.domain_size
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        self.index.sample(rng)
    }

    pub fn batch<R: Rng + ?Sized>(&self, m: usize, rng: &mut R) -> SampleBatch {
        SampleBatch {
            draws: (0..m).map(|_| self.index.sample(rng)).collect(),
            source_seed: None,
        }
    }
}

/// `m` i.i.d. draws from `p`, deterministic in `seed`.
pub fn sample(p: &FiniteDistribution, m: usize, seed: u64) -> SampleBatch {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut batch = Sampler::new(p).batch(m, &mut rng);
    batch.source_seed = Some(seed);
    batch
}

pub fn sample_with<R: Rng + ?Sized>(p: &FiniteDistribution, m: usize, rng: &mut R) -> SampleBatch {
    Sampler::new(p).batch(m, rng)
}

/// Normalized frequency vector of a batch.
pub fn empirical(batch: &SampleBatch, domain_size: usize) -> Result<FiniteDistribution, DistributionError> {
    if batch.is_empty() {
        return Err(DistributionError::EmptyBatch);
    }
    let counts = batch.histogram(domain_size)?;
    let m = batch.len() as u64;
    Ok(FiniteDistribution::from_raw(
        counts
            .into_iter()
            .map(|c| Rational::new(c.into(), m.into()))
            .collect(),
    ))
}

/// `E_{x ~ p}[f(x)]`.
pub fn expectation(p: &FiniteDistribution, f: &ValueTable) -> Result<Rational, DistributionError> {
    if f.len() != p.domain_size() {
        return Err(DistributionError::TableLength {
            len: f.len(),
            domain_size: p.domain_size(),
        });
    }
    Ok(dot(p.probs(), f.values()))
}

pub(crate) fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .map(|(x, y)| x * y)
        .sum()
}

/// Convex combination of distributions on a common domain.
pub fn mix(weights: &[Rational], parts: &[FiniteDistribution]) -> Result<FiniteDistribution, DistributionError> {
    let first = parts.first().ok_or(DistributionError::NoParts)?;
    if weights.len() != parts.len() {
        return Err(DistributionError::WeightCount {
            weights: weights.len(),
            parts: parts.len(),
        });
    }
    if weights.iter().any(|w| w.is_negative()) || !weights.iter().sum::<Rational>().is_one() {
        return Err(DistributionError::WeightsNotOnSimplex);
    }
    for part in parts {
        check_domains(first, part)?;
    }
    let mut probs = vec![Rational::zero(); first.domain_size()];
    for (w, part) in weights.iter().zip(parts) {
        if w.is_zero() {
            continue;
        }
        for (acc, p) in probs.iter_mut().zip(part.probs()) {
            if !p.is_zero() {
                *acc += w * p;
            }
        }
    }
    Ok(FiniteDistribution::from_raw(probs))
}

/// `(TV(p, q_1), ..., TV(p, q_n))`.
pub fn distance_vector(
    p: &FiniteDistribution,
    candidates: &[FiniteDistribution],
) -> Result<DistanceVector, DistributionError> {
    if candidates.is_empty() {
        return Err(DistributionError::NoParts);
    }
    candidates
        .iter()
        .map(|q| total_variation(p, q))
        .collect::<Result<Vec<_>, _>>()
        .map(DistanceVector)
}

/// Float-mode total variation for large Monte-Carlo scoring.
pub fn total_variation_f64(p: &[f64], q: &[f64]) -> f64 {
    0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn dist(lits: &[&str]) -> FiniteDistribution {
        FiniteDistribution::parse(lits).unwrap()
    }

    #[test]
    fn constructor_rejects_bad_vectors() {
        assert_eq!(FiniteDistribution::new(vec![]), Err(DistributionError::EmptyDomain));
        assert!(matches!(
            FiniteDistribution::parse(&["1/2", "1/3"]),
            Err(DistributionError::NotNormalized { .. })
        ));
        assert_eq!(
            FiniteDistribution::parse(&["3/2", "-1/2"]),
            Err(DistributionError::Negative { index: 1 })
        );
        assert!(FiniteDistribution::from_f64(&[0.5, 0.5 + 1e-13]).is_ok());
        assert!(FiniteDistribution::from_f64(&[0.5, 0.5 + 1e-9]).is_err());
    }

    #[test]
    fn tv_examples() {
        let p = dist(&["1/3", "1/3", "1/3"]);
        let q = dist(&["1/2", "1/2", "0"]);
        assert_eq!(total_variation(&p, &p).unwrap(), Rational::zero());
        assert_eq!(
            total_variation(&FiniteDistribution::point_mass(3, 0), &FiniteDistribution::point_mass(3, 2)).unwrap(),
            Rational::one()
        );
        assert_eq!(total_variation(&p, &q).unwrap(), ratio(1, 3));
        assert_eq!(tv_subset_oracle(&p, &q).unwrap(), ratio(1, 3));
        assert_eq!(overlap(&p, &q).unwrap(), ratio(2, 3));
        assert!(matches!(
            total_variation(&p, &FiniteDistribution::uniform(2)),
            Err(DistributionError::DomainMismatch { left: 3, right: 2 })
        ));
    }

    #[test]
    fn subset_oracle_examples() {
        let p = dist(&["0.5", "0.5"]);
        let q = dist(&["0.8", "0.2"]);
        assert_eq!(tv_subset_oracle(&p, &q).unwrap(), ratio(3, 10));
        let u = FiniteDistribution::uniform(5);
        assert_eq!(tv_subset_oracle(&u, &u).unwrap(), Rational::zero());
        let big = FiniteDistribution::uniform(25);
        assert!(matches!(
            tv_subset_oracle(&big, &big),
            Err(DistributionError::DomainTooLarge { size: 25, .. })
        ));
    }

    #[test]
    fn overlap_extremes() {
        let u = FiniteDistribution::uniform(4);
        assert_eq!(overlap(&u, &u).unwrap(), Rational::one());
        let a = FiniteDistribution::point_mass(4, 1);
        let b = FiniteDistribution::point_mass(4, 3);
        assert_eq!(overlap(&a, &b).unwrap(), Rational::zero());
    }

    #[test]
    fn sampling_edge_cases() {
        let a = FiniteDistribution::point_mass(4, 2);
        assert_eq!(sample(&a, 5, 9).draws, vec![2; 5]);
        assert!(sample(&a, 0, 9).is_empty());
        assert_eq!(sample(&FiniteDistribution::uniform(7), 50, 3), sample(&FiniteDistribution::uniform(7), 50, 3));
    }

    #[test]
    fn sampling_frequencies_concentrate() {
        // Hoeffding: P(|freq - 1/2| > 0.01) <= 2 exp(-2 * 1e5 * 1e-4) = 2e-9
        let batch = sample(&FiniteDistribution::uniform(2), 100_000, 2024);
        let emp = empirical(&batch, 2).unwrap();
        for p in emp.probs() {
            assert!((to_f64(p) - 0.5).abs() <= 0.01);
        }
    }

    #[test]
    fn empirical_examples() {
        let b = SampleBatch { draws: vec![0, 0, 1, 1], source_seed: None };
        assert_eq!(empirical(&b, 2).unwrap(), dist(&["1/2", "1/2"]));
        let b = SampleBatch { draws: vec![2], source_seed: None };
        assert_eq!(empirical(&b, 3).unwrap(), dist(&["0", "0", "1"]));
        let empty = SampleBatch { draws: vec![], source_seed: None };
        assert_eq!(empirical(&empty, 3), Err(DistributionError::EmptyBatch));
        let bad = SampleBatch { draws: vec![3], source_seed: None };
        assert!(matches!(empirical(&bad, 3), Err(DistributionError::IndexOutOfRange { .. })));
    }

    #[test]
    fn empirical_of_concatenation_is_count_weighted_mixture() {
        let a = SampleBatch { draws: vec![0, 1, 1], source_seed: None };
        let b = SampleBatch { draws: vec![2, 2, 0, 1, 2], source_seed: None };
        let joint = empirical(&a.concat(&b), 3).unwrap();
        let mixed = mix(
            &[ratio(3, 8), ratio(5, 8)],
            &[empirical(&a, 3).unwrap(), empirical(&b, 3).unwrap()],
        )
        .unwrap();
        assert_eq!(joint, mixed);
    }

    #[test]
    fn expectation_examples() {
        let p = dist(&["0.25", "0.75"]);
        let one = ValueTable::constant(2, Rational::one()).unwrap();
        assert_eq!(expectation(&p, &one).unwrap(), Rational::one());
        let ind = ValueTable::indicator(&[false, true]);
        assert_eq!(expectation(&p, &ind).unwrap(), ratio(3, 4));
        let f = ValueTable::new(vec![ratio(1, 5), ratio(3, 5)]).unwrap();
        assert_eq!(expectation(&p, &f).unwrap(), ratio(1, 2));
        assert_eq!(
            ValueTable::new(vec![ratio(6, 5)]),
            Err(DistributionError::ValueOutOfRange { index: 0 })
        );
    }

    #[test]
    fn mix_examples() {
        let p = dist(&["1/5", "3/10", "1/2"]);
        assert_eq!(mix(&[Rational::one()], &[p.clone()]).unwrap(), p);
        let a = FiniteDistribution::point_mass(2, 0);
        let b = FiniteDistribution::point_mass(2, 1);
        assert_eq!(mix(&[ratio(1, 2), ratio(1, 2)], &[a, b]).unwrap(), dist(&["1/2", "1/2"]));
        assert_eq!(mix(&[ratio(2, 7), ratio(5, 7)], &[p.clone(), p.clone()]).unwrap(), p);
        assert_eq!(
            mix(&[ratio(1, 2), ratio(1, 3)], &[p.clone(), p.clone()]),
            Err(DistributionError::WeightsNotOnSimplex)
        );
    }

    #[test]
    fn distance_vector_examples() {
        let q = vec![dist(&["1/2", "1/2", "0"]), dist(&["0", "1/2", "1/2"])];
        let v = distance_vector(&FiniteDistribution::uniform(3), &q).unwrap();
        assert_eq!(v.entries(), &[ratio(1, 3), ratio(1, 3)]);
        let v = distance_vector(&q[1], &q).unwrap();
        assert_eq!(v.entries()[1], Rational::zero());
        let deltas = vec![FiniteDistribution::point_mass(2, 0), FiniteDistribution::point_mass(2, 1)];
        let v = distance_vector(&FiniteDistribution::uniform(2), &deltas).unwrap();
        assert_eq!(v.entries(), &[ratio(1, 2), ratio(1, 2)]);
        assert_eq!(
            distance_vector(&FiniteDistribution::uniform(2), &[]),
            Err(DistributionError::NoParts)
        );
    }
}
