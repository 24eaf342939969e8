//! Learners that select a distribution close to the target.
//!
//! * [`yatracos_proper`]: minimum-distance estimate over all Yatracos sets;
//!   returns a candidate.
//! * [`improper_select_exact`], [`improper_select_a1`],
//!   [`improper_select_a2`]: the adaptive scheme. It keeps lower bounds `y`
//!   on the true distance vector, asks whether `y + eps` is dominated by some
//!   distance vector, and if not uses the minimax functions of `y + eps` to
//!   find a coordinate whose bound can be raised by `eps / 2`.
//! * [`static_select`]: one shot from the empirical threshold-class
//!   distances.
//!
//! Every improper output `o` satisfies `TV(o, q_i) <= y_i + eps` for its
//! certificate `y`; when `y <= v(p)` this gives `TV(o, p) <= 2 opt + eps`.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::distributions::{
    distance_vector, empirical, DistanceVector, DistributionError, FiniteDistribution, SampleBatch, ValueTable,
};
use crate::geometry::{
    common_domain, minimax_from_hyperplane, qtv_separate, GeometryError, MinimaxWitness, QtvSeparator, Separation,
};
use crate::oracle::{OracleError, StatOracle};
use crate::rational::{format_rational, int, Rational};
use crate::yatracos::{uniform_convergence_budget, yatracos_sets, ThresholdClass, YatracosError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SelectorError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Yatracos(#[from] YatracosError),
    #[error(transparent)]
    Distribution(#[from] DistributionError),
    #[error("epsilon must lie in (0, 1), got {0}")]
    InvalidEpsilon(String),
    #[error("need at least {needed} samples, got {got}")]
    InsufficientSamples { needed: usize, got: usize },
    #[error("oracle answers inconsistent with the accuracy contract at iteration {iteration}: {detail}")]
    OracleAccuracyViolation {
        iteration: usize,
        detail: String,
        ledger: Vec<QueryRecord>,
    },
    #[error("empirical distances plus eps/2 are not dominated; the deviation event failed")]
    DeviationEvent { estimates: Vec<String> },
    #[error("no termination after {0} iterations")]
    NoTermination(usize),
}

/// One oracle call made by an adaptive learner.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QueryRecord {
    pub iteration: usize,
    /// Candidate indices whose functions were averaged into the query.
    pub indices: Vec<usize>,
    #[serde(with = "crate::rational::serde_rational")]
    pub answer: Rational,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelectionResult {
    pub output: FiniteDistribution,
    /// Lower-bound vector `y` for improper learners; for the proper learner
    /// the per-candidate Yatracos scores.
    pub certificate_y: DistanceVector,
    /// Loop passes, including the final membership pass.
    pub iterations: usize,
    pub queries_used: usize,
    pub proper_index: Option<usize>,
    /// Coordinate raised at each progress step.
    pub chosen: Vec<usize>,
    pub ledger: Vec<QueryRecord>,
}

impl SelectionResult {
    /// `TV(output, q_i) <= y_i + eps` for every `i`.
    pub fn certificate_holds(&self, candidates: &[FiniteDistribution], eps: &Rational) -> Result<bool, SelectorError> {
        let v = distance_vector(&self.output, candidates)?;
        Ok(v.dominated_by(&self.certificate_y.shifted(eps)))
    }

    /// Replays `chosen` to recover `y^0, y^1, ...`.
    pub fn trajectory(&self, n: usize, eps: &Rational) -> Vec<DistanceVector> {
        let step = eps / int(2);
        let mut y = vec![Rational::zero(); n];
        let mut out = vec![DistanceVector::new(y.clone())];
        for j in &self.chosen {
            y[*j] += &step;
            out.push(DistanceVector::new(y.clone()));
        }
        out
    }
}

/// How the exact learner chooses among coordinates with enough progress.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum IndexRule {
    /// Largest `z_j - y_j`, ties to the lowest index.
    #[default]
    ArgMax,
    /// Lowest `j` with `z_j - y_j >= 3 eps / 4`.
    FirstQualifying,
}

fn check_eps(eps: &Rational) -> Result<(), SelectorError> {
    if !eps.is_positive() || *eps >= Rational::one() {
        return Err(SelectorError::InvalidEpsilon(format_rational(eps)));
    }
    Ok(())
}

fn ceil_log2(n: usize) -> usize {
    if n <= 1 {
        0
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }
}

/// `ceil(2 n / eps)`.
pub fn iteration_bound(n: usize, eps: &Rational) -> usize {
    crate::rational::ceil_to_u64(&(int(2 * n as i64) / eps)) as usize
}

/// Queries needed by A1: `n` per progress step.
pub fn required_budget_a1(n: usize, eps: &Rational) -> usize {
    iteration_bound(n, eps) * n
}

/// Queries needed by A2: two per halving level per progress step.
pub fn required_budget_a2(n: usize, eps: &Rational) -> usize {
    iteration_bound(n, eps) * 2 * ceil_log2(n).max(1)
}

/// Per-answer accuracy A1 relies on.
pub fn accuracy_a1(eps: &Rational) -> Rational {
    eps / int(4)
}

/// Per-answer accuracy A2 relies on: `eps / (4 ceil(log2 n))`.
pub fn accuracy_a2(n: usize, eps: &Rational) -> Rational {
    eps / int(4 * ceil_log2(n).max(1) as i64)
}

struct Progress {
    chosen: Vec<usize>,
    ledger: Vec<QueryRecord>,
}

/// Runs the membership / progress loop. `pick` receives the iteration, the
/// minimax witness for `y + eps` and `y`, and returns the coordinate to raise.
fn adaptive_loop<F>(candidates: &[FiniteDistribution], eps: &Rational, mut pick: F) -> Result<SelectionResult, SelectorError>
where
    F: FnMut(usize, &MinimaxWitness, &DistanceVector, &mut Progress) -> Result<usize, SelectorError>,
{
    check_eps(eps)?;
    let n = candidates.len();
    let mut separator = QtvSeparator::new(candidates)?;
    let step = eps / int(2);
    let cap = 2 * iteration_bound(n, eps) + 2;
    let mut y = DistanceVector::zeros(n);
    let mut progress = Progress {
        chosen: Vec::new(),
        ledger: Vec::new(),
    };
    for iteration in 1..=cap {
        match separator.separate(&y.shifted(eps))? {
            Separation::Witness(output) => {
                return Ok(SelectionResult {
                    output,
                    certificate_y: y,
                    iterations: iteration,
                    queries_used: progress.ledger.len(),
                    proper_index: None,
                    chosen: progress.chosen,
                    ledger: progress.ledger,
                })
            }
            Separation::Separator(plane) => {
                let witness = minimax_from_hyperplane(&separator, plane)?;
                let j = pick(iteration, &witness, &y, &mut progress)?;
                y.entries_mut()[j] += &step;
                progress.chosen.push(j);
            }
        }
    }
    Err(SelectorError::NoTermination(cap))
}

/// The adaptive learner with exact expectations under `p`.
pub fn improper_select_exact(
    candidates: &[FiniteDistribution],
    p: &FiniteDistribution,
    eps: &Rational,
) -> Result<SelectionResult, SelectorError> {
    improper_select_exact_with(candidates, p, eps, IndexRule::ArgMax)
}

pub fn improper_select_exact_with(
    candidates: &[FiniteDistribution],
    p: &FiniteDistribution,
    eps: &Rational,
    rule: IndexRule,
) -> Result<SelectionResult, SelectorError> {
    let d = common_domain(candidates)?;
    if p.domain_size() != d {
        return Err(DistributionError::DomainMismatch {
            left: p.domain_size(),
            right: d,
        }
        .into());
    }
    let accept = eps * Rational::new(3.into(), 4.into());
    adaptive_loop(candidates, eps, |iteration, witness, y, _| {
        let gaps: Vec<Rational> = witness
            .z(p)
            .into_iter()
            .zip(y.entries())
            .map(|(z, y)| z - y)
            .collect();
        let found = match rule {
            IndexRule::ArgMax => {
                let mut best = 0;
                for j in 1..gaps.len() {
                    if gaps[j] > gaps[best] {
                        best = j;
                    }
                }
                (gaps[best] >= *eps).then_some(best)
            }
            IndexRule::FirstQualifying => gaps.iter().position(|g| *g >= accept),
        };
        found.ok_or_else(|| SelectorError::OracleAccuracyViolation {
            iteration,
            detail: "exact progress below eps; separation is inconsistent".into(),
            ledger: Vec::new(),
        })
    })
}

/// A1: query `E_p[F_i]` for every `i` and raise the lowest coordinate whose
/// estimated progress is at least `3 eps / 4`. Needs `eps / 4`-accurate
/// answers and [`required_budget_a1`] queries.
pub fn improper_select_a1(
    candidates: &[FiniteDistribution],
    oracle: &mut StatOracle,
    eps: &Rational,
) -> Result<SelectionResult, SelectorError> {
    let accept = eps * Rational::new(3.into(), 4.into());
    adaptive_loop(candidates, eps, |iteration, witness, y, progress| {
        let mut estimates = Vec::with_capacity(witness.functions.len());
        for (i, f) in witness.functions.iter().enumerate() {
            let answer = oracle.answer(f)?;
            estimates.push(&answer - &witness.baseline[i] - &y.entries()[i]);
            progress.ledger.push(QueryRecord {
                iteration,
                indices: vec![i],
                answer,
            });
        }
        estimates
            .iter()
            .position(|g| *g >= accept)
            .ok_or_else(|| SelectorError::OracleAccuracyViolation {
                iteration,
                detail: format!(
                    "no estimated gap reaches 3eps/4; gaps = [{}]",
                    estimates.iter().map(format_rational).collect::<Vec<_>>().join(", ")
                ),
                ledger: progress.ledger.clone(),
            })
    })
}

/// Halving search for a coordinate with large weighted gap. `average(S)`
/// returns an estimate of `sum_{i in S} h_i (z_i - y_i) / sum_{i in S} h_i`
/// for a contiguous index range `S`. At each level both halves with
/// positive weight are estimated and the larger estimate (ties to the lower
/// half) is followed. Returns the leaf and the last estimate made, if any.
pub fn halving_search<F>(h: &[Rational], mut average: F) -> Result<(usize, Option<Rational>), SelectorError>
where
    F: FnMut(&[usize]) -> Result<Rational, SelectorError>,
{
    let weight = |r: &[usize]| r.iter().map(|i| h[*i].clone()).sum::<Rational>();
    let mut range: Vec<usize> = (0..h.len()).collect();
    let mut last = None;
    while range.len() > 1 {
        let mid = range.len().div_ceil(2);
        let (lower, upper) = range.split_at(mid);
        let (wl, wu) = (weight(lower), weight(upper));
        let next = if wu.is_zero() {
            lower.to_vec()
        } else if wl.is_zero() {
            upper.to_vec()
        } else {
            let el = average(lower)?;
            let eu = average(upper)?;
            if eu > el {
                last = Some(eu);
                upper.to_vec()
            } else {
                last = Some(el);
                lower.to_vec()
            }
        };
        range = next;
    }
    Ok((range[0], last))
}

/// A2: find the coordinate by [`halving_search`] with aggregated queries
/// `G_S = sum_{i in S} h_i F_i / sum_{i in S} h_i`. Needs
/// [`accuracy_a2`]-accurate answers and [`required_budget_a2`] queries.
pub fn improper_select_a2(
    candidates: &[FiniteDistribution],
    oracle: &mut StatOracle,
    eps: &Rational,
) -> Result<SelectionResult, SelectorError> {
    let n = candidates.len();
    let accuracy = accuracy_a2(n, eps);
    let floor = eps / int(2) - &accuracy;
    adaptive_loop(candidates, eps, |iteration, witness, y, progress| {
        let h = &witness.hyperplane.weights;
        let d = witness.functions[0].len();
        let (j, last) = halving_search(h, |range| {
            let total: Rational = range.iter().map(|i| h[*i].clone()).sum();
            let mut values = vec![Rational::zero(); d];
            let mut offset = Rational::zero();
            for &i in range {
                if h[i].is_zero() {
                    continue;
                }
                let w = &h[i] / &total;
                for (v, f) in values.iter_mut().zip(witness.functions[i].values()) {
                    if !f.is_zero() {
                        *v += &w * f;
                    }
                }
                offset += &w * (&witness.baseline[i] + &y.entries()[i]);
            }
            let query = ValueTable::new(values)?;
            let answer = oracle.answer(&query)?;
            progress.ledger.push(QueryRecord {
                iteration,
                indices: range.to_vec(),
                answer: answer.clone(),
            });
            Ok(answer - offset)
        })?;
        if let Some(estimate) = last {
            if estimate < floor {
                return Err(SelectorError::OracleAccuracyViolation {
                    iteration,
                    detail: format!(
                        "leaf estimate {} below eps/2 - accuracy = {}",
                        format_rational(&estimate),
                        format_rational(&floor)
                    ),
                    ledger: progress.ledger.clone(),
                });
            }
        }
        Ok(j)
    })
}

/// Static learner: empirical threshold-class distances `v_hat`, then a
/// distribution dominated by `v_hat + eps / 2`. Needs
/// `(10 n + ln(1/delta)) / (eps/2)^2` samples. The certificate is
/// `max(v_hat - eps/2, 0)`.
pub fn static_select(
    candidates: &[FiniteDistribution],
    batch: &SampleBatch,
    eps: &Rational,
    delta: f64,
) -> Result<SelectionResult, SelectorError> {
    check_eps(eps)?;
    let d = common_domain(candidates)?;
    let n = candidates.len();
    let needed = uniform_convergence_budget(n, crate::rational::to_f64(eps), delta);
    if batch.len() < needed {
        return Err(SelectorError::InsufficientSamples {
            needed,
            got: batch.len(),
        });
    }
    let class = ThresholdClass::new(candidates)?;
    let emp = empirical(batch, d)?;
    let estimates = class.distance_vector(&emp, candidates)?;
    let half = eps / int(2);
    let target = DistanceVector::new(estimates.clone()).shifted(&half);
    match qtv_separate(candidates, &target)? {
        Separation::Witness(output) => {
            let certificate = estimates
                .iter()
                .map(|v| {
                    let c = v - &half;
                    if c.is_negative() {
                        Rational::zero()
                    } else {
                        c
                    }
                })
                .collect();
            Ok(SelectionResult {
                output,
                certificate_y: DistanceVector::new(certificate),
                iterations: 1,
                queries_used: 0,
                proper_index: None,
                chosen: Vec::new(),
                ledger: Vec::new(),
            })
        }
        Separation::Separator(_) => Err(SelectorError::DeviationEvent {
            estimates: estimates.iter().map(format_rational).collect(),
        }),
    }
}

/// Minimum-distance selection over every Yatracos set `S_{k,l}`, with the
/// candidate masses of each set precomputed.
#[derive(Debug, Clone)]
pub struct YatracosTournament {
    candidates: Vec<FiniteDistribution>,
    /// `sets[s][x]` for each ordered pair `k != l`.
    sets: Vec<Vec<bool>>,
    /// `masses[i][s] = q_i(S_s)`.
    masses: Vec<Vec<Rational>>,
}

impl YatracosTournament {
    pub fn new(candidates: &[FiniteDistribution]) -> Result<Self, SelectorError> {
        common_domain(candidates)?;
        let n = candidates.len();
        let mut sets = Vec::new();
        // a single candidate has no pairs and wins by default
        if n > 1 {
            let matrix = yatracos_sets(candidates)?;
            for k in 0..n {
                for l in 0..n {
                    if k != l {
                        sets.push(matrix.set(k, l).to_vec());
                    }
                }
            }
        }
        let masses = candidates
            .iter()
            .map(|q| sets.iter().map(|s| q.mass_of(s)).collect())
            .collect();
        Ok(Self {
            candidates: candidates.to_vec(),
            sets,
            masses,
        })
    }

    /// Per-candidate score `max_s |q_i(S_s) - p_S(S_s)|`.
    pub fn scores(&self, batch: &SampleBatch) -> Result<Vec<Rational>, SelectorError> {
        if batch.is_empty() {
            return Err(DistributionError::EmptyBatch.into());
        }
        let d = self.candidates[0].domain_size();
        let m = Rational::from_integer((batch.len() as u64).into());
        let mut hits = vec![0u64; self.sets.len()];
        for &x in &batch.draws {
            if x >= d {
                return Err(DistributionError::IndexOutOfRange { index: x, domain_size: d }.into());
            }
            for (s, set) in self.sets.iter().enumerate() {
                hits[s] += set[x] as u64;
            }
        }
        let empirical: Vec<Rational> = hits.iter().map(|c| Rational::from_integer((*c).into()) / &m).collect();
        Ok(self
            .masses
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&empirical)
                    .map(|(q, e)| (q - e).abs())
                    .max()
                    .unwrap_or_else(Rational::zero)
            })
            .collect())
    }

    pub fn select(&self, batch: &SampleBatch) -> Result<SelectionResult, SelectorError> {
        let scores = self.scores(batch)?;
        let mut best = 0;
        for i in 1..scores.len() {
            if scores[i] < scores[best] {
                best = i;
            }
        }
        Ok(SelectionResult {
            output: self.candidates[best].clone(),
            certificate_y: DistanceVector::new(scores),
            iterations: 1,
            queries_used: 0,
            proper_index: Some(best),
            chosen: Vec::new(),
            ledger: Vec::new(),
        })
    }
}

pub fn yatracos_proper(candidates: &[FiniteDistribution], batch: &SampleBatch) -> Result<SelectionResult, SelectorError> {
    YatracosTournament::new(candidates)?.select(batch)
}

/// `TV(output, p) <= 2 opt + eps`.
pub fn guarantee_holds(achieved: &Rational, opt: &Rational, eps: &Rational) -> bool {
    *achieved <= int(2) * opt + eps
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::{sample, total_variation};
    use crate::oracle::QueryBudget;
    use crate::rational::ratio;

    fn deltas() -> Vec<FiniteDistribution> {
        vec![FiniteDistribution::point_mass(2, 0), FiniteDistribution::point_mass(2, 1)]
    }

    #[test]
    fn exact_on_two_point_masses() {
        let p = FiniteDistribution::uniform(2);
        let eps = ratio(1, 10);
        let r = improper_select_exact(&deltas(), &p, &eps).unwrap();
        let v = distance_vector(&r.output, &deltas()).unwrap();
        assert!(v.dominated_by(&DistanceVector::new(vec![ratio(3, 5), ratio(3, 5)])));
        assert!(total_variation(&r.output, &p).unwrap() <= ratio(1, 10));
        assert!(r.iterations <= iteration_bound(2, &eps));
        assert!(r.certificate_holds(&deltas(), &eps).unwrap());
    }

    #[test]
    fn realizable_case_lands_within_eps() {
        let q = vec![
            FiniteDistribution::parse(&["1/2", "1/2", "0"]).unwrap(),
            FiniteDistribution::parse(&["0", "1/3", "2/3"]).unwrap(),
        ];
        let r = improper_select_exact(&q, &q[1], &ratio(1, 10)).unwrap();
        assert!(total_variation(&r.output, &q[1]).unwrap() <= ratio(1, 10));
        let single = vec![q[1].clone()];
        assert_eq!(improper_select_exact(&single, &q[1], &ratio(1, 10)).unwrap().iterations, 1);
    }

    #[test]
    fn a1_exact_matches_exact_first_qualifying() {
        let q = vec![
            FiniteDistribution::parse(&["1/2", "1/4", "1/8", "1/8"]).unwrap(),
            FiniteDistribution::parse(&["1/8", "1/2", "1/4", "1/8"]).unwrap(),
            FiniteDistribution::parse(&["1/4", "1/8", "1/8", "1/2"]).unwrap(),
        ];
        let p = FiniteDistribution::parse(&["1/10", "2/10", "3/10", "4/10"]).unwrap();
        let eps = ratio(1, 10);
        let reference = improper_select_exact_with(&q, &p, &eps, IndexRule::FirstQualifying).unwrap();
        let budget = QueryBudget::new(required_budget_a1(3, &eps), 0.025, 0.1).unwrap();
        let mut oracle = StatOracle::exact(p.clone(), budget);
        let a1 = improper_select_a1(&q, &mut oracle, &eps).unwrap();
        assert_eq!(a1.chosen, reference.chosen);
        assert_eq!(a1.output, reference.output);
        assert_eq!(a1.queries_used, 3 * a1.chosen.len());
    }

    #[test]
    fn halving_search_descends_to_the_gap() {
        let h = vec![ratio(1, 4); 4];
        let gaps = [Rational::zero(), Rational::zero(), Rational::zero(), ratio(4, 100)];
        let mut calls = 0;
        let (j, last) = halving_search(&h, |range| {
            calls += 1;
            Ok(range.iter().map(|i| gaps[*i].clone()).sum::<Rational>() / int(range.len() as i64))
        })
        .unwrap();
        assert_eq!(j, 3);
        assert_eq!(last, Some(ratio(4, 100)));
        assert_eq!(calls, 4);
        let (j, _) = halving_search(&[ratio(1, 2), ratio(1, 2)], |r| Ok(int(r[0] as i64))).unwrap();
        assert_eq!(j, 1);
    }

    #[test]
    fn a2_with_exact_answers_meets_guarantee() {
        let q = vec![
            FiniteDistribution::parse(&["1/2", "1/4", "1/8", "1/8"]).unwrap(),
            FiniteDistribution::parse(&["1/8", "1/2", "1/4", "1/8"]).unwrap(),
            FiniteDistribution::parse(&["1/4", "1/8", "1/8", "1/2"]).unwrap(),
        ];
        let p = FiniteDistribution::parse(&["1/10", "2/10", "3/10", "4/10"]).unwrap();
        let eps = ratio(1, 10);
        let budget = QueryBudget::new(required_budget_a2(3, &eps), 0.0125, 0.1).unwrap();
        let mut oracle = StatOracle::exact(p.clone(), budget);
        let r = improper_select_a2(&q, &mut oracle, &eps).unwrap();
        let opt = q.iter().map(|qi| total_variation(qi, &p).unwrap()).min().unwrap();
        assert!(guarantee_holds(&total_variation(&r.output, &p).unwrap(), &opt, &eps));
        assert!(r.queries_used <= required_budget_a2(3, &eps));
    }

    #[test]
    fn yatracos_picks_the_closer_candidate() {
        let q = vec![
            FiniteDistribution::parse(&["9/10", "1/10"]).unwrap(),
            FiniteDistribution::parse(&["1/10", "9/10"]).unwrap(),
        ];
        let batch = sample(&q[0], 100, 11);
        let r = yatracos_proper(&q, &batch).unwrap();
        assert_eq!(r.proper_index, Some(0));
        let empty = SampleBatch {
            draws: vec![],
            source_seed: None,
        };
        assert!(yatracos_proper(&q, &empty).is_err());
    }

    #[test]
    fn static_requires_budget() {
        let q = deltas();
        let batch = sample(&q[0], 10, 1);
        assert!(matches!(
            static_select(&q, &batch, &ratio(1, 4), 0.1),
            Err(SelectorError::InsufficientSamples { .. })
        ));
    }

    #[test]
    fn budget_helpers() {
        assert_eq!(ceil_log2(1), 0);
        assert_eq!(ceil_log2(2), 1);
        assert_eq!(ceil_log2(5), 3);
        assert_eq!(iteration_bound(3, &ratio(1, 5)), 30);
        assert_eq!(required_budget_a1(3, &ratio(1, 5)), 90);
        assert_eq!(required_budget_a2(3, &ratio(1, 5)), 120);
        assert_eq!(accuracy_a2(4, &ratio(1, 5)), ratio(1, 40));
    }
}
