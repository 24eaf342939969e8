//! Yatracos sets and the finite class of threshold functions built on them.
//!
//! For a base index `i`, each atom `x` has the binary feature vector
//! `phi_i(x) = (S_{i,j}(x))_{j != i}` where `S_{i,j} = {x : q_i(x) >= q_j(x)}`.
//! A threshold function with base `i` is `x -> [sum_j w_j S_{i,j}(x) >= c]`
//! with real `w`, `c`; on a finite domain its behaviours are exactly the
//! linearly separable dichotomies of the distinct feature vectors, which
//! [`ThresholdClass`] enumerates once (one small LP per dichotomy) and
//! caches. The union over bases is the class `F`.

use std::collections::{HashMap, HashSet};

use num_traits::{One, Zero};
use thiserror::Error;

use crate::distributions::{DistributionError, FiniteDistribution, ValueTable};
use crate::geometry::{common_domain, GeometryError};
use crate::lp::{self, LinearProgram, LpError, LpOutcome, Relation, Sense};
use crate::rational::Rational;

/// Largest number of distinct feature vectors per base index.
pub const FEATURE_CLASS_LIMIT: usize = 20;
/// Largest domain accepted by [`shatter_check`].
pub const SHATTER_DOMAIN_LIMIT: usize = 12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum YatracosError {
    #[error("need at least two candidates, got {0}")]
    TooFewCandidates(usize),
    #[error(transparent)]
    Distribution(#[from] DistributionError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error("base index {index} has {classes} feature classes; limit is {limit}")]
    GuardExceeded { index: usize, classes: usize, limit: usize },
    #[error("domain of size {size} exceeds the limit {limit}")]
    DomainTooLarge { size: usize, limit: usize },
    #[error("base index {index} out of range for {n} candidates")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("weight table has length {found}, expected {expected}")]
    WeightLength { expected: usize, found: usize },
}

/// `sets[i][j][x]` is true iff `q_i(x) >= q_j(x)`. Diagonal entries are all
/// true and never used.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct YatracosMatrix {
    sets: Vec<Vec<Vec<bool>>>,
}

impl YatracosMatrix {
    pub fn n(&self) -> usize {
        self.sets.len()
    }

    pub fn domain_size(&self) -> usize {
        self.sets[0][0].len()
    }

    pub fn set(&self, i: usize, j: usize) -> &[bool] {
        &self.sets[i][j]
    }

    pub fn contains(&self, i: usize, j: usize, x: usize) -> bool {
        self.sets[i][j][x]
    }

    /// Atoms of `S_{i,j}` in ascending order.
    pub fn members(&self, i: usize, j: usize) -> Vec<usize> {
        (0..self.domain_size()).filter(|x| self.sets[i][j][*x]).collect()
    }
}

pub fn yatracos_sets(candidates: &[FiniteDistribution]) -> Result<YatracosMatrix, YatracosError> {
    if candidates.len() < 2 {
        return Err(YatracosError::TooFewCandidates(candidates.len()));
    }
    let d = common_domain(candidates)?;
    let sets = candidates
        .iter()
        .map(|qi| {
            candidates
                .iter()
                .map(|qj| (0..d).map(|x| qi.prob(x) >= qj.prob(x)).collect())
                .collect()
        })
        .collect();
    Ok(YatracosMatrix { sets })
}

/// Feature vectors for one base index, grouped into classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeatureTable {
    pub base: usize,
    /// Distinct vectors `(S_{i,j}(x))_{j != i}` in order of first appearance.
    pub classes: Vec<Vec<bool>>,
    pub class_of: Vec<usize>,
}

impl FeatureTable {
    /// `phi_i(x)` with the trailing constant coordinate.
    pub fn vector(&self, x: usize) -> Vec<u8> {
        let mut v: Vec<u8> = self.classes[self.class_of[x]].iter().map(|b| *b as u8).collect();
        v.push(1);
        v
    }
}

fn features_of(matrix: &YatracosMatrix, i: usize) -> FeatureTable {
    let mut index: HashMap<Vec<bool>, usize> = HashMap::new();
    let mut classes = Vec::new();
    let mut class_of = Vec::new();
    for x in 0..matrix.domain_size() {
        let phi: Vec<bool> = (0..matrix.n()).filter(|j| *j != i).map(|j| matrix.contains(i, j, x)).collect();
        let c = *index.entry(phi.clone()).or_insert_with(|| {
            classes.push(phi);
            classes.len() - 1
        });
        class_of.push(c);
    }
    FeatureTable {
        base: i,
        classes,
        class_of,
    }
}

pub fn feature_map(candidates: &[FiniteDistribution], i: usize) -> Result<FeatureTable, YatracosError> {
    let matrix = yatracos_sets(candidates)?;
    if i >= matrix.n() {
        return Err(YatracosError::IndexOutOfRange { index: i, n: matrix.n() });
    }
    Ok(features_of(&matrix, i))
}

/// `x -> [sum_{j != i} w_j S_{i,j}(x) >= c]`, or `> c` when strict.
/// `weights[i]` is ignored.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdFunction {
    pub base: usize,
    pub weights: Vec<Rational>,
    pub threshold: Rational,
    pub strict: bool,
}

impl ThresholdFunction {
    pub fn eval(&self, matrix: &YatracosMatrix, x: usize) -> bool {
        let score: Rational = self
            .weights
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != self.base && matrix.contains(self.base, *j, x))
            .map(|(_, w)| w.clone())
            .sum();
        if self.strict {
            score > self.threshold
        } else {
            score >= self.threshold
        }
    }

    pub fn indicator(&self, matrix: &YatracosMatrix) -> Vec<bool> {
        (0..matrix.domain_size()).map(|x| self.eval(matrix, x)).collect()
    }

    pub fn table(&self, matrix: &YatracosMatrix) -> ValueTable {
        ValueTable::indicator(&self.indicator(matrix))
    }

    pub fn complement(&self) -> Self {
        Self {
            base: self.base,
            weights: self.weights.iter().map(|w| -w).collect(),
            threshold: -&self.threshold,
            strict: !self.strict,
        }
    }
}

/// One realizable behaviour: the set of feature classes mapped to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct Realization {
    pub mask: u32,
    pub function: ThresholdFunction,
}

#[derive(Debug, Clone)]
struct BaseClass {
    features: FeatureTable,
    realizable: Vec<Realization>,
}

/// The class `F` for a fixed family, with every realizable dichotomy cached.
#[derive(Debug, Clone)]
pub struct ThresholdClass {
    matrix: YatracosMatrix,
    bases: Vec<BaseClass>,
}

/// Solves for `a, c` with `a.phi - c >= 0` on the chosen classes and
/// `a.phi - c <= -1` on the others.
fn realize(features: &FeatureTable, n: usize, mask: u32) -> Result<Option<ThresholdFunction>, YatracosError> {
    let dims = n - 1;
    let mut program = LinearProgram::new(Sense::Minimize, vec![Rational::zero(); dims + 1]);
    for v in 0..=dims {
        program.set_free(v);
    }
    for (k, phi) in features.classes.iter().enumerate() {
        let mut row: Vec<Rational> = phi.iter().map(|b| if *b { Rational::one() } else { Rational::zero() }).collect();
        row.push(-Rational::one());
        if mask >> k & 1 == 1 {
            program.constrain(row, Relation::Ge, Rational::zero());
        } else {
            program.constrain(row, Relation::Le, -Rational::one());
        }
    }
    match lp::solve(&program)? {
        LpOutcome::Optimal { x, .. } => {
            let mut weights = Vec::with_capacity(n);
            let mut it = x[..dims].iter();
            for j in 0..n {
                if j == features.base {
                    weights.push(Rational::zero());
                } else {
                    weights.push(it.next().expect("one weight per other index").clone());
                }
            }
            Ok(Some(ThresholdFunction {
                base: features.base,
                weights,
                threshold: x[dims].clone(),
                strict: false,
            }))
        }
        _ => Ok(None),
    }
}

impl ThresholdClass {
    pub fn new(candidates: &[FiniteDistribution]) -> Result<Self, YatracosError> {
        let matrix = yatracos_sets(candidates)?;
        let n = matrix.n();
        let mut bases = Vec::with_capacity(n);
        for i in 0..n {
            let features = features_of(&matrix, i);
            let m = features.classes.len();
            if m > FEATURE_CLASS_LIMIT {
                return Err(YatracosError::GuardExceeded {
                    index: i,
                    classes: m,
                    limit: FEATURE_CLASS_LIMIT,
                });
            }
            let mut realizable = Vec::new();
            for mask in 0..(1u32 << m) {
                if let Some(function) = realize(&features, n, mask)? {
                    realizable.push(Realization { mask, function });
                }
            }
            bases.push(BaseClass { features, realizable });
        }
        Ok(Self { matrix, bases })
    }

    pub fn matrix(&self) -> &YatracosMatrix {
        &self.matrix
    }

    pub fn n(&self) -> usize {
        self.matrix.n()
    }

    pub fn features(&self, i: usize) -> &FeatureTable {
        &self.bases[i].features
    }

    pub fn realizations(&self, i: usize) -> &[Realization] {
        &self.bases[i].realizable
    }

    /// Behaviour of a realization as a subset of the domain.
    pub fn indicator(&self, i: usize, mask: u32) -> Vec<bool> {
        self.bases[i]
            .features
            .class_of
            .iter()
            .map(|c| mask >> c & 1 == 1)
            .collect()
    }

    /// All distinct behaviours of `F` on the domain, in a fixed order.
    pub fn behaviours(&self) -> Vec<Vec<bool>> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for (i, base) in self.bases.iter().enumerate() {
            for r in &base.realizable {
                let ind = self.indicator(i, r.mask);
                if seen.insert(ind.clone()) {
                    out.push(ind);
                }
            }
        }
        out
    }

    /// Maximizes `sum_{x : f(x) = 1} w(x)` over threshold functions with base
    /// `i`; ties keep the smallest class mask.
    pub fn best_threshold(&self, i: usize, w: &[Rational]) -> Result<(ThresholdFunction, Rational), YatracosError> {
        let base = self.bases.get(i).ok_or(YatracosError::IndexOutOfRange { index: i, n: self.n() })?;
        if w.len() != self.matrix.domain_size() {
            return Err(YatracosError::WeightLength {
                expected: self.matrix.domain_size(),
                found: w.len(),
            });
        }
        let mut per_class = vec![Rational::zero(); base.features.classes.len()];
        for (x, c) in base.features.class_of.iter().enumerate() {
            per_class[*c] += &w[x];
        }
        let mut best: Option<(&Realization, Rational)> = None;
        for r in &base.realizable {
            let value: Rational = per_class
                .iter()
                .enumerate()
                .filter(|(k, _)| r.mask >> k & 1 == 1)
                .map(|(_, v)| v.clone())
                .sum();
            if best.as_ref().is_none_or(|(_, b)| value > *b) {
                best = Some((r, value));
            }
        }
        let (r, value) = best.expect("the empty dichotomy is always realizable");
        Ok((r.function.clone(), value))
    }

    /// `d_F(p, q) = sup_{f in F} (E_p f - E_q f)`; `F` is closed under
    /// complements, so this is also the sup of the absolute difference.
    pub fn distance(&self, p: &FiniteDistribution, q: &FiniteDistribution) -> Result<Rational, YatracosError> {
        if p.domain_size() != self.matrix.domain_size() || q.domain_size() != self.matrix.domain_size() {
            return Err(DistributionError::DomainMismatch {
                left: p.domain_size(),
                right: self.matrix.domain_size(),
            }
            .into());
        }
        let w: Vec<Rational> = p.probs().iter().zip(q.probs()).map(|(a, b)| a - b).collect();
        let mut best = Rational::zero();
        for l in 0..self.n() {
            let (_, v) = self.best_threshold(l, &w)?;
            if v > best {
                best = v;
            }
        }
        Ok(best)
    }

    /// `(d_F(p, q_1), ..., d_F(p, q_n))`.
    pub fn distance_vector(
        &self,
        p: &FiniteDistribution,
        candidates: &[FiniteDistribution],
    ) -> Result<Vec<Rational>, YatracosError> {
        candidates.iter().map(|q| self.distance(p, q)).collect()
    }

    /// `min_p sum_i h_i d_F(p, q_i)` from the LP over `p` and epigraph
    /// variables `t_i >= E_p f - E_{q_i} f` for every behaviour `f`.
    pub fn support_function(&self, candidates: &[FiniteDistribution], h: &[Rational]) -> Result<Rational, YatracosError> {
        let n = self.n();
        if h.len() != n {
            return Err(YatracosError::WeightLength { expected: n, found: h.len() });
        }
        let d = self.matrix.domain_size();
        let behaviours = self.behaviours();
        let mut objective = vec![Rational::zero(); d + n];
        objective[d..].clone_from_slice(h);
        let mut program = LinearProgram::new(Sense::Minimize, objective);
        for (i, q) in candidates.iter().enumerate() {
            for f in &behaviours {
                let mut row = vec![Rational::zero(); d + n];
                let mut q_mass = Rational::zero();
                for x in 0..d {
                    if f[x] {
                        row[x] = -Rational::one();
                        q_mass += q.prob(x);
                    }
                }
                row[d + i] = Rational::one();
                program.constrain(row, Relation::Ge, -q_mass);
            }
        }
        let mut mass = vec![Rational::zero(); d + n];
        mass[..d].iter_mut().for_each(|v| *v = Rational::one());
        program.constrain(mass, Relation::Eq, Rational::one());
        match lp::solve(&program)? {
            LpOutcome::Optimal { value, .. } => Ok(value),
            other => Err(GeometryError::Certificate(format!("F-support LP returned {:?}", other.status())).into()),
        }
    }
}

pub fn best_threshold(
    candidates: &[FiniteDistribution],
    i: usize,
    w: &[Rational],
) -> Result<(ThresholdFunction, Rational), YatracosError> {
    ThresholdClass::new(candidates)?.best_threshold(i, w)
}

pub fn d_f(
    p: &FiniteDistribution,
    q: &FiniteDistribution,
    candidates: &[FiniteDistribution],
) -> Result<Rational, YatracosError> {
    ThresholdClass::new(candidates)?.distance(p, q)
}

/// Size of the largest subset of the domain, up to `limit_points`, on which
/// `F` realizes all dichotomies.
pub fn shatter_check(candidates: &[FiniteDistribution], limit_points: usize) -> Result<usize, YatracosError> {
    let d = common_domain(candidates)?;
    if d > SHATTER_DOMAIN_LIMIT {
        return Err(YatracosError::DomainTooLarge {
            size: d,
            limit: SHATTER_DOMAIN_LIMIT,
        });
    }
    let class = ThresholdClass::new(candidates)?;
    let behaviours: Vec<u32> = class
        .behaviours()
        .iter()
        .map(|b| b.iter().enumerate().filter(|(_, v)| **v).map(|(x, _)| 1u32 << x).sum())
        .collect();
    let mut best = 0;
    for subset in 1u32..(1 << d) {
        let size = subset.count_ones() as usize;
        if size <= best || size > limit_points {
            continue;
        }
        let traces: HashSet<u32> = behaviours.iter().map(|b| b & subset).collect();
        if traces.len() == 1 << size {
            best = size;
        }
    }
    Ok(best)
}

/// `sqrt((10 n + ln(1/delta)) / m)`: the uniform deviation of empirical
/// `F`-distances used by the static learner.
pub fn deviation_bound(n: usize, delta: f64, m: usize) -> f64 {
    ((10.0 * n as f64 + (1.0 / delta).ln()) / m as f64).sqrt()
}

/// Smallest `m` with [`deviation_bound`] at most `eps / 2`.
pub fn uniform_convergence_budget(n: usize, eps: f64, delta: f64) -> usize {
    ((10.0 * n as f64 + (1.0 / delta).ln()) / (eps / 2.0).powi(2)).ceil() as usize
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn three_atom() -> Vec<FiniteDistribution> {
        vec![
            FiniteDistribution::parse(&["1/2", "1/2", "0"]).unwrap(),
            FiniteDistribution::parse(&["0", "1/2", "1/2"]).unwrap(),
        ]
    }

    #[test]
    fn yatracos_sets_example() {
        let m = yatracos_sets(&three_atom()).unwrap();
        assert_eq!(m.members(0, 1), vec![0, 1]);
        assert_eq!(m.members(1, 0), vec![1, 2]);
        let q = three_atom();
        let same = yatracos_sets(&[q[0].clone(), q[0].clone()]).unwrap();
        assert_eq!(same.members(0, 1), vec![0, 1, 2]);
        assert_eq!(yatracos_sets(&q[..1]), Err(YatracosError::TooFewCandidates(1)));
    }

    #[test]
    fn feature_map_example() {
        let t = feature_map(&three_atom(), 0).unwrap();
        assert_eq!(t.vector(0), vec![1, 1]);
        assert_eq!(t.vector(1), vec![1, 1]);
        assert_eq!(t.vector(2), vec![0, 1]);
        assert_eq!(t.classes.len(), 2);
    }

    #[test]
    fn best_threshold_examples() {
        let q = three_atom();
        let (f, v) = best_threshold(&q, 0, &[ratio(1, 5), ratio(-1, 10), ratio(-1, 10)]).unwrap();
        assert_eq!(v, ratio(1, 10));
        let m = yatracos_sets(&q).unwrap();
        assert_eq!(f.indicator(&m), vec![true, true, false]);
        let (f, v) = best_threshold(&q, 0, &[ratio(-1, 5), Rational::zero(), ratio(-1, 10)]).unwrap();
        assert_eq!(v, Rational::zero());
        assert_eq!(f.indicator(&m), vec![false; 3]);
        let (f, v) = best_threshold(&q, 1, &[ratio(1, 5), Rational::zero(), ratio(1, 10)]).unwrap();
        assert_eq!(v, ratio(3, 10));
        assert_eq!(f.indicator(&m), vec![true; 3]);
    }

    #[test]
    fn complements_are_realized() {
        let q = vec![
            FiniteDistribution::parse(&["1/2", "1/4", "1/8", "1/8"]).unwrap(),
            FiniteDistribution::parse(&["1/8", "1/2", "1/4", "1/8"]).unwrap(),
            FiniteDistribution::parse(&["1/4", "1/8", "1/8", "1/2"]).unwrap(),
        ];
        let class = ThresholdClass::new(&q).unwrap();
        for i in 0..3 {
            let m = class.features(i).classes.len();
            let full = (1u32 << m) - 1;
            let masks: HashSet<u32> = class.realizations(i).iter().map(|r| r.mask).collect();
            for r in class.realizations(i) {
                assert!(masks.contains(&(full ^ r.mask)));
                let ind = r.function.indicator(class.matrix());
                assert_eq!(ind, class.indicator(i, r.mask));
                let comp: Vec<bool> = ind.iter().map(|b| !b).collect();
                assert_eq!(r.function.complement().indicator(class.matrix()), comp);
            }
        }
    }

    #[test]
    fn d_f_basics() {
        let q = three_atom();
        assert_eq!(d_f(&q[0], &q[0], &q).unwrap(), Rational::zero());
        assert_eq!(d_f(&q[1], &q[0], &q).unwrap(), ratio(1, 2));
    }

    #[test]
    fn shatter_small_cases() {
        let q = three_atom();
        assert!(shatter_check(&q, 3).unwrap() <= 2);
        let flat = vec![FiniteDistribution::uniform(4), FiniteDistribution::uniform(4)];
        assert!(shatter_check(&flat, 4).unwrap() <= 1);
        let big = vec![FiniteDistribution::uniform(13), FiniteDistribution::uniform(13)];
        assert!(matches!(shatter_check(&big, 2), Err(YatracosError::DomainTooLarge { .. })));
    }

    #[test]
    fn budget_formula() {
        assert_eq!(uniform_convergence_budget(3, 0.25, 0.1), 2068);
        assert!(deviation_bound(3, 0.1, 2068) <= 0.125);
    }
}
