//! Two families of targets that no proper learner can tell apart from few
//! samples, while an improper learner still achieves factor 2.
//!
//! The domain has `2N` atoms, a left half `0..N` and a right half `N..2N`.
//! The base pair is
//!
//! ```text
//! q1 = (1-b)/(2N) on the left, (1+b)/(2N) on the right
//! q2 = the mirror image of q1
//! ```
//!
//! A family-1 member picks `R`, a `k`-subset of `0..N`, and starts from `q1`,
//! raising each left atom `j in R` to `1/N` and emptying its mirror `j + N`.
//! Family 2 is the mirror image. With `k = N b / (1 + b)` both families
//! average to the uniform distribution; each member is at distance `b/2`
//! from its own base and `b(3-b) / (2(1+b))` from the other, so picking the
//! wrong base costs a factor `(3-b)/(1+b)`.

use num_integer::binomial;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::distributions::{sample_with, total_variation, DistributionError, FiniteDistribution, SampleBatch};
use crate::oracle::{fresh_sample_size, QueryBudget, StatOracle};
use crate::rational::{format_rational, int, to_f64, Rational};
use crate::selectors::{
    accuracy_a1, guarantee_holds, improper_select_a1, improper_select_exact, required_budget_a1, SelectorError,
    YatracosTournament,
};

/// Upper limit on `(2N)^m * C(N, k)` for exact enumeration.
pub const ENUMERATION_LIMIT: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LowerBoundError {
    #[error("beta must lie in (0, 1), got {0}")]
    BetaOutOfRange(String),
    #[error("k = N beta / (1 + beta) = {0} is not a positive integer")]
    NonIntegerK(String),
    #[error("N = {n} too small for m = {m}: need N > 2(m - 1)")]
    NTooSmall { n: usize, m: usize },
    #[error("conditioning event has zero probability")]
    ZeroProbabilityEvent,
    #[error("enumeration size {size} exceeds {limit}")]
    GuardExceeded { size: String, limit: u64 },
    #[error("family must be 1 or 2, got {0}")]
    BadFamily(u8),
    #[error("spike set must be {k} distinct indices below {n}")]
    BadSpikes { k: usize, n: usize },
    #[error(transparent)]
    Distribution(#[from] DistributionError),
    #[error(transparent)]
    Selector(#[from] SelectorError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct LowerBoundInstance {
    pub beta: Rational,
    /// Atoms per half.
    pub n: usize,
    /// Spikes per member.
    pub k: usize,
    pub q1: FiniteDistribution,
    pub q2: FiniteDistribution,
}

impl LowerBoundInstance {
    pub fn domain_size(&self) -> usize {
        2 * self.n
    }

    pub fn candidates(&self) -> Vec<FiniteDistribution> {
        vec![self.q1.clone(), self.q2.clone()]
    }

}

pub fn build_instance(beta: &Rational, n: usize) -> Result<LowerBoundInstance, LowerBoundError> {
    if !beta.is_positive() || *beta >= Rational::one() {
        return Err(LowerBoundError::BetaOutOfRange(format_rational(beta)));
    }
    let k = int(n as i64) * beta / (Rational::one() + beta);
    if !k.is_integer() || !k.is_positive() {
        return Err(LowerBoundError::NonIntegerK(format_rational(&k)));
    }
    let k = k.to_integer().to_usize().expect("k <= N");
    let two_n = int(2 * n as i64);
    let low = (Rational::one() - beta) / &two_n;
    let high = (Rational::one() + beta) / &two_n;
    let q1: Vec<Rational> = (0..2 * n).map(|x| if x < n { low.clone() } else { high.clone() }).collect();
    let q2: Vec<Rational> = (0..2 * n).map(|x| if x < n { high.clone() } else { low.clone() }).collect();
    Ok(LowerBoundInstance {
        beta: beta.clone(),
        n,
        k,
        q1: FiniteDistribution::new(q1)?,
        q2: FiniteDistribution::new(q2)?,
    })
}

/// Smallest `N >= min_n` for which `k` is an integer.
pub fn smallest_valid_n(beta: &Rational, min_n: usize) -> Result<usize, LowerBoundError> {
    if !beta.is_positive() || *beta >= Rational::one() {
        return Err(LowerBoundError::BetaOutOfRange(format_rational(beta)));
    }
    // k integer iff N is a multiple of the reduced denominator of b/(1+b)
    let frac = beta / (Rational::one() + beta);
    let step = frac.denom().to_usize().expect("small denominator");
    Ok(min_n.max(1).div_ceil(step) * step)
}

#[derive(Debug, Clone, PartialEq)]
pub struct FamilyMember {
    pub family: u8,
    /// Spike positions, ascending, each below `N`.
    pub spikes: Vec<usize>,
    pub p: FiniteDistribution,
}

/// The member of `family` with spike set `spikes`.
pub fn member(instance: &LowerBoundInstance, family: u8, spikes: &[usize]) -> Result<FamilyMember, LowerBoundError> {
    let n = instance.n;
    let mut sorted = spikes.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != instance.k || sorted.iter().any(|j| *j >= n) {
        return Err(LowerBoundError::BadSpikes { k: instance.k, n });
    }
    let (base, low_first) = match family {
        1 => (&instance.q1, true),
        2 => (&instance.q2, false),
        other => return Err(LowerBoundError::BadFamily(other)),
    };
    let mut probs = base.probs().to_vec();
    let spike = Rational::new(1.into(), (n as u64).into());
    for &j in &sorted {
        let (up, down) = if low_first { (j, j + n) } else { (j + n, j) };
        probs[up] = spike.clone();
        probs[down] = Rational::zero();
    }
    Ok(FamilyMember {
        family,
        spikes: sorted,
        p: FiniteDistribution::new(probs)?,
    })
}

/// Uniformly random member of `family`.
pub fn sample_member<R: Rng + ?Sized>(
    instance: &LowerBoundInstance,
    family: u8,
    rng: &mut R,
) -> Result<FamilyMember, LowerBoundError> {
    let spikes = index::sample(rng, instance.n, instance.k).into_vec();
    member(instance, family, &spikes)
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn spike_sets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for j in start..n {
            if n - j < k - cur.len() {
                break;
            }
            cur.push(j);
            rec(j + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// `(TV(q1, p), TV(q2, p))`.
pub fn exact_tvs(instance: &LowerBoundInstance, m: &FamilyMember) -> Result<(Rational, Rational), LowerBoundError> {
    Ok((total_variation(&instance.q1, &m.p)?, total_variation(&instance.q2, &m.p)?))
}

/// `b / 2`.
pub fn own_base_tv(beta: &Rational) -> Rational {
    beta / int(2)
}

/// `b (3 - b) / (2 (1 + b))`.
pub fn other_base_tv(beta: &Rational) -> Rational {
    beta * (int(3) - beta) / (int(2) * (Rational::one() + beta))
}

/// `(3 - b) / (1 + b)`.
pub fn wrong_base_factor(beta: &Rational) -> Rational {
    (int(3) - beta) / (Rational::one() + beta)
}

/// `prod_{t=1}^{m-1} (1 - 2t/N)`.
pub fn collision_bound(m: usize, n: usize) -> Result<Rational, LowerBoundError> {
    if m == 0 || n <= 2 * (m - 1) {
        return Err(LowerBoundError::NTooSmall { n, m });
    }
    let big_n = int(n as i64);
    Ok((1..m).fold(Rational::one(), |acc, t| acc * (Rational::one() - int(2 * t as i64) / &big_n)))
}

/// `TV(P|E, Q|E) + 2 P(not E) + 2 Q(not E)`.
pub fn chain_rule_bound(
    p: &FiniteDistribution,
    q: &FiniteDistribution,
    event: &[bool],
) -> Result<Rational, LowerBoundError> {
    if event.len() != p.domain_size() || q.domain_size() != p.domain_size() {
        return Err(DistributionError::DomainMismatch {
            left: p.domain_size(),
            right: q.domain_size().max(event.len()),
        }
        .into());
    }
    let pe = p.mass_of(event);
    let qe = q.mass_of(event);
    if pe.is_zero() || qe.is_zero() {
        return Err(LowerBoundError::ZeroProbabilityEvent);
    }
    let mut conditional_l1 = Rational::zero();
    for x in 0..event.len() {
        if event[x] {
            conditional_l1 += (p.prob(x) / &pe - q.prob(x) / &qe).abs();
        }
    }
    Ok(conditional_l1 / int(2) + int(2) * (Rational::one() - pe) + int(2) * (Rational::one() - qe))
}

/// `(1 - tv) / 2`.
pub fn lecam_mistake_bound(tv: &Rational) -> Rational {
    (Rational::one() - tv) / int(2)
}

fn enumeration_size(instance: &LowerBoundInstance, m: usize) -> Result<(), LowerBoundError> {
    let sequences = num_bigint::BigUint::from(instance.domain_size()).pow(m as u32);
    let sets = binomial(num_bigint::BigUint::from(instance.n), num_bigint::BigUint::from(instance.k));
    let size = sequences * sets;
    if size > num_bigint::BigUint::from(ENUMERATION_LIMIT) {
        return Err(LowerBoundError::GuardExceeded {
            size: size.to_string(),
            limit: ENUMERATION_LIMIT,
        });
    }
    Ok(())
}

/// Probability of every length-`m` sample sequence under the family mixture,
/// indexed in base `2N` with the first draw most significant.
pub fn mixture_sequence_law(
    instance: &LowerBoundInstance,
    family: u8,
    m: usize,
) -> Result<Vec<Rational>, LowerBoundError> {
    enumeration_size(instance, m)?;
    let d = instance.domain_size();
    let sets = spike_sets(instance.n, instance.k);
    let count = Rational::from_integer((sets.len() as u64).into());
    let total = d.pow(m as u32);
    let mut law = vec![Rational::zero(); total];
    for spikes in &sets {
        let p = member(instance, family, spikes)?.p;
        // products over sequences, built digit by digit
        let mut probs = vec![Rational::one()];
        for _ in 0..m {
            let mut next = Vec::with_capacity(probs.len() * d);
            for prefix in &probs {
                for x in 0..d {
                    next.push(prefix * p.prob(x));
                }
            }
            probs = next;
        }
        for (acc, v) in law.iter_mut().zip(probs) {
            *acc += v;
        }
    }
    Ok(law.into_iter().map(|v| v / &count).collect())
}

/// Exact TV between the `m`-sample laws of the two family mixtures.
pub fn exact_mixture_tv(instance: &LowerBoundInstance, m: usize) -> Result<Rational, LowerBoundError> {
    let a = mixture_sequence_law(instance, 1, m)?;
    let b = mixture_sequence_law(instance, 2, m)?;
    Ok(a.iter().zip(&b).map(|(x, y)| (x - y).abs()).sum::<Rational>() / int(2))
}

/// Indicator over sequences (same indexing as [`mixture_sequence_law`]) of
/// the event that all `m` draws land on distinct atoms.
pub fn no_collision_event(instance: &LowerBoundInstance, m: usize) -> Vec<bool> {
    let d = instance.domain_size();
    (0..d.pow(m as u32))
        .map(|mut code| {
            let mut seen = vec![false; d];
            for _ in 0..m {
                let x = code % d;
                code /= d;
                if seen[x] {
                    return false;
                }
                seen[x] = true;
            }
            true
        })
        .collect()
}

/// A learner run inside the distinguishing experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum Learner {
    /// Minimum-distance candidate over the Yatracos sets.
    Yatracos,
    /// Bayes rule between the two family mixtures; enumerable instances only.
    Bayes,
    /// Adaptive learner with exact expectations (a reference that sees `p`).
    Exact {
        #[serde(with = "crate::rational::serde_rational")]
        epsilon: Rational,
    },
    /// A1 with a fresh-sample oracle at accuracy `eps / 4`.
    A1Fresh {
        #[serde(with = "crate::rational::serde_rational")]
        epsilon: Rational,
        delta: f64,
    },
}

impl Learner {
    pub fn label(&self) -> &'static str {
        match self {
            Learner::Yatracos => "yatracos",
            Learner::Bayes => "bayes",
            Learner::Exact { .. } => "exact",
            Learner::A1Fresh { .. } => "a1",
        }
    }

    pub fn is_proper(&self) -> bool {
        matches!(self, Learner::Yatracos | Learner::Bayes)
    }

    fn epsilon(&self) -> Option<&Rational> {
        match self {
            Learner::Exact { epsilon } | Learner::A1Fresh { epsilon, .. } => Some(epsilon),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub family: u8,
    /// 1-based candidate index for proper learners.
    pub selector_choice: Option<u8>,
    #[serde(with = "crate::rational::serde_rational")]
    pub exact_tv_q1: Rational,
    #[serde(with = "crate::rational::serde_rational")]
    pub exact_tv_q2: Rational,
    #[serde(with = "crate::rational::serde_rational")]
    pub opt: Rational,
    #[serde(with = "crate::rational::serde_rational")]
    pub achieved_tv: Rational,
    pub factor: f64,
    /// Wrong base for proper learners; guarantee violated for improper ones.
    pub error_flag: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub learner: Learner,
    pub m: usize,
    pub trials: usize,
    pub error_rate: f64,
    pub mean_factor: f64,
    /// Fraction of trials with `TV(output, p) <= 2 opt + eps` (improper
    /// learners only).
    pub guarantee_rate: Option<f64>,
    pub mean_tv_q1: [f64; 2],
    pub mean_tv_q2: [f64; 2],
    pub records: Vec<TrialRecord>,
}

enum Prepared {
    Yatracos(YatracosTournament),
    Bayes(Vec<Rational>, Vec<Rational>),
    Exact(Rational),
    A1 { epsilon: Rational, budget: QueryBudget, block: usize },
}

/// Per-trial generator: ChaCha8 seeded with the master seed, stream = trial.
pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

/// Each trial draws a family by a fair coin, a uniform member, `m` samples
/// from it, runs the learner and scores its output by exact TV.
pub fn distinguisher_experiment(
    instance: &LowerBoundInstance,
    learner: &Learner,
    m: usize,
    trials: usize,
    seed: u64,
) -> Result<ExperimentReport, LowerBoundError> {
    let candidates = instance.candidates();
    let prepared = match learner {
        Learner::Yatracos => Prepared::Yatracos(YatracosTournament::new(&candidates)?),
        Learner::Bayes => Prepared::Bayes(
            mixture_sequence_law(instance, 1, m)?,
            mixture_sequence_law(instance, 2, m)?,
        ),
        Learner::Exact { epsilon } => Prepared::Exact(epsilon.clone()),
        Learner::A1Fresh { epsilon, delta } => {
            let k = required_budget_a1(2, epsilon);
            let tau = to_f64(&accuracy_a1(epsilon));
            let budget = QueryBudget::new(k, tau, *delta).map_err(SelectorError::from)?;
            Prepared::A1 {
                epsilon: epsilon.clone(),
                budget,
                block: fresh_sample_size(&budget),
            }
        }
    };
    let records = (0..trials)
        .into_par_iter()
        .map(|trial| run_trial(instance, &candidates, learner, &prepared, m, seed, trial))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(summarize(learner, m, records))
}

fn run_trial(
    instance: &LowerBoundInstance,
    candidates: &[FiniteDistribution],
    learner: &Learner,
    prepared: &Prepared,
    m: usize,
    seed: u64,
    trial: usize,
) -> Result<TrialRecord, LowerBoundError> {
    let mut rng = trial_rng(seed, trial);
    let family: u8 = if rng.gen_bool(0.5) { 1 } else { 2 };
    let target = sample_member(instance, family, &mut rng)?;
    let batch = sample_with(&target.p, m, &mut rng);
    let (tv1, tv2) = exact_tvs(instance, &target)?;
    let opt = if tv1 < tv2 { tv1.clone() } else { tv2.clone() };
    let (choice, output) = match prepared {
        Prepared::Yatracos(t) => {
            let r = t.select(&batch)?;
            (r.proper_index, r.output)
        }
        Prepared::Bayes(law1, law2) => {
            let i = bayes_choice(instance, &batch, law1, law2);
            (Some(i), candidates[i].clone())
        }
        Prepared::Exact(eps) => (None, improper_select_exact(candidates, &target.p, eps)?.output),
        Prepared::A1 { epsilon, budget, block } => {
            let mut oracle = StatOracle::fresh(&target.p, *budget, *block, rng.gen());
            (None, improper_select_a1(candidates, &mut oracle, epsilon)?.output)
        }
    };
    let achieved = match choice {
        Some(0) => tv1.clone(),
        Some(_) => tv2.clone(),
        None => total_variation(&output, &target.p)?,
    };
    let error_flag = match (choice, learner.epsilon()) {
        (Some(i), _) => i + 1 != family as usize,
        (None, Some(eps)) => !guarantee_holds(&achieved, &opt, eps),
        (None, None) => false,
    };
    Ok(TrialRecord {
        trial,
        family,
        selector_choice: choice.map(|i| i as u8 + 1),
        factor: to_f64(&achieved) / to_f64(&opt),
        exact_tv_q1: tv1,
        exact_tv_q2: tv2,
        opt,
        achieved_tv: achieved,
        error_flag,
    })
}

/// Index of the family mixture with the larger likelihood; ties go to 0.
fn bayes_choice(instance: &LowerBoundInstance, batch: &SampleBatch, law1: &[Rational], law2: &[Rational]) -> usize {
    let d = instance.domain_size();
    let code = batch.draws.iter().fold(0usize, |acc, x| acc * d + x);
    if law2[code] > law1[code] {
        1
    } else {
        0
    }
}

fn summarize(learner: &Learner, m: usize, records: Vec<TrialRecord>) -> ExperimentReport {
    let trials = records.len();
    let denom = trials.max(1) as f64;
    let error_rate = records.iter().filter(|r| r.error_flag).count() as f64 / denom;
    let mean_factor = records.iter().map(|r| r.factor).sum::<f64>() / denom;
    let guarantee_rate = learner.epsilon().map(|eps| {
        records
            .iter()
            .filter(|r| guarantee_holds(&r.achieved_tv, &r.opt, eps))
            .count() as f64
            / denom
    });
    let mut mean_tv_q1 = [0.0; 2];
    let mut mean_tv_q2 = [0.0; 2];
    let mut counts = [0usize; 2];
    for r in &records {
        let f = (r.family - 1) as usize;
        counts[f] += 1;
        mean_tv_q1[f] += to_f64(&r.exact_tv_q1);
        mean_tv_q2[f] += to_f64(&r.exact_tv_q2);
    }
    for f in 0..2 {
        if counts[f] > 0 {
            mean_tv_q1[f] /= counts[f] as f64;
            mean_tv_q2[f] /= counts[f] as f64;
        }
    }
    ExperimentReport {
        learner: learner.clone(),
        m,
        trials,
        error_rate,
        mean_factor,
        guarantee_rate,
        mean_tv_q1,
        mean_tv_q2,
        records,
    }
}

/// `beta = 1/2`, `m = 10`, and the smallest `N >= 100 m^2` with integer `k`.
pub fn separation_demo_instance(m: usize) -> Result<LowerBoundInstance, LowerBoundError> {
    let beta = Rational::new(1.into(), 2.into());
    let n = smallest_valid_n(&beta, 100 * m * m)?;
    build_instance(&beta, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn instance_examples() {
        let inst = build_instance(&ratio(1, 2), 3).unwrap();
        assert_eq!(inst.k, 1);
        assert_eq!(inst.q1, FiniteDistribution::parse(&["1/12", "1/12", "1/12", "1/4", "1/4", "1/4"]).unwrap());
        assert_eq!(total_variation(&inst.q1, &inst.q2).unwrap(), ratio(1, 2));
        assert!(matches!(build_instance(&ratio(1, 2), 4), Err(LowerBoundError::NonIntegerK(_))));
        assert!(build_instance(&Rational::one(), 3).is_err());
    }

    #[test]
    fn member_example_and_mirror() {
        let inst = build_instance(&ratio(1, 2), 3).unwrap();
        let m1 = member(&inst, 1, &[0]).unwrap();
        assert_eq!(m1.p, FiniteDistribution::parse(&["1/3", "1/12", "1/12", "0", "1/4", "1/4"]).unwrap());
        let m2 = member(&inst, 2, &[0]).unwrap();
        let mirrored: Vec<Rational> = (0..6).map(|x| m1.p.prob((x + 3) % 6).clone()).collect();
        assert_eq!(m2.p.probs(), mirrored.as_slice());
        assert_eq!(exact_tvs(&inst, &m1).unwrap(), (ratio(1, 4), ratio(5, 12)));
        assert_eq!(exact_tvs(&inst, &m2).unwrap(), (ratio(5, 12), ratio(1, 4)));
    }

    #[test]
    fn closed_forms() {
        assert_eq!(wrong_base_factor(&ratio(1, 2)), ratio(5, 3));
        assert_eq!(wrong_base_factor(&ratio(1, 50)), ratio(149, 51));
        assert_eq!(other_base_tv(&ratio(1, 2)) / own_base_tv(&ratio(1, 2)), ratio(5, 3));
        assert_eq!(smallest_valid_n(&ratio(1, 2), 10_000).unwrap(), 10_002);
    }

    #[test]
    fn collision_examples() {
        assert_eq!(collision_bound(1, 5).unwrap(), Rational::one());
        assert_eq!(collision_bound(3, 100).unwrap(), ratio(9408, 10000));
        assert!(collision_bound(10, 10_000).unwrap() >= ratio(11, 12));
        assert!(collision_bound(3, 4).is_err());
    }

    #[test]
    fn lecam_examples() {
        assert_eq!(lecam_mistake_bound(&ratio(1, 3)), ratio(1, 3));
        assert_eq!(lecam_mistake_bound(&Rational::zero()), ratio(1, 2));
        assert_eq!(lecam_mistake_bound(&Rational::one()), Rational::zero());
    }

    #[test]
    fn chain_rule_examples() {
        let p = FiniteDistribution::parse(&["1/2", "1/4", "1/4"]).unwrap();
        let q = FiniteDistribution::parse(&["1/4", "1/4", "1/2"]).unwrap();
        let full = [true; 3];
        assert_eq!(chain_rule_bound(&p, &q, &full).unwrap(), total_variation(&p, &q).unwrap());
        let a = FiniteDistribution::parse(&["9/20", "9/20", "1/10"]).unwrap();
        let b = FiniteDistribution::parse(&["9/20", "9/20", "1/10"]).unwrap();
        assert_eq!(chain_rule_bound(&a, &b, &[true, true, false]).unwrap(), ratio(2, 5));
        assert_eq!(
            chain_rule_bound(&p, &q, &[false; 3]),
            Err(LowerBoundError::ZeroProbabilityEvent)
        );
    }

    #[test]
    fn mixture_tv_single_sample_is_zero() {
        let inst = build_instance(&ratio(1, 2), 3).unwrap();
        assert_eq!(exact_mixture_tv(&inst, 1).unwrap(), Rational::zero());
        let big = build_instance(&ratio(1, 2), 30).unwrap();
        assert!(matches!(exact_mixture_tv(&big, 4), Err(LowerBoundError::GuardExceeded { .. })));
    }

    #[test]
    fn spike_set_enumeration() {
        assert_eq!(spike_sets(4, 2).len(), 6);
        assert_eq!(spike_sets(3, 1), vec![vec![0], vec![1], vec![2]]);
    }
}
