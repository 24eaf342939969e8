//! The dominating set `Q_TV` of distance vectors and its dual objects.
//!
//! `Q_TV = { u : u >= v(p) for some distribution p }` is convex and upward
//! closed, so every point outside it is cut off by a hyperplane with a
//! nonnegative normal. This module decides membership (returning a
//! distribution whose distance vector is dominated by the query point) or
//! separation (returning such a normal), evaluates the support function
//! `h -> min_p sum_i h_i TV(p, q_i)` by two independent routes, and builds
//! the minimax functions `F_1..F_n` that turn a separating hyperplane into
//! statistical queries.
//!
//! Membership has two implementations:
//!
//! * [`SeparationMethod::CuttingPlane`] (default): a small master LP over the
//!   normal `h` against a pool of distributions, refined with exact greedy
//!   best responses until either the master value is nonpositive (the dual
//!   weights mix pool members into a witness) or a normal with a positive
//!   exact margin is found. A floating-point pass proposes certificates
//!   first; only exactly verified ones are returned.
//! * [`SeparationMethod::FarkasLp`]: one feasibility LP over `p` and positive
//!   part slacks; on infeasibility the Farkas multipliers of the `n`
//!   distance rows, normalized, form the normal.

use std::cmp::Ordering;
use std::collections::HashMap;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::distributions::{
    distance_vector, total_variation, DistanceVector, DistributionError, FiniteDistribution, ValueTable,
};
use crate::lp::{self, LinearProgram, LpError, LpOutcome, Relation, Sense};
use crate::rational::{format_rational, to_f64, Rational};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("candidate family is empty")]
    EmptyFamily,
    #[error(transparent)]
    Distribution(#[from] DistributionError),
    #[error("vector has length {found}, expected {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("weights must be nonnegative and sum to 1")]
    NotOnSimplex,
    #[error("point lies in the dominating set; no separating hyperplane exists")]
    InsideDominatingSet,
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error("certificate check failed: {0}")]
    Certificate(String),
}

/// Checks that the family is nonempty and shares one domain; returns its size.
pub fn common_domain(candidates: &[FiniteDistribution]) -> Result<usize, GeometryError> {
    let first = candidates.first().ok_or(GeometryError::EmptyFamily)?;
    for q in candidates {
        if q.domain_size() != first.domain_size() {
            return Err(DistributionError::DomainMismatch {
                left: first.domain_size(),
                right: q.domain_size(),
            }
            .into());
        }
    }
    Ok(first.domain_size())
}

fn check_simplex(h: &[Rational], n: usize) -> Result<(), GeometryError> {
    if h.len() != n {
        return Err(GeometryError::DimensionMismatch {
            expected: n,
            found: h.len(),
        });
    }
    if h.iter().any(|v| v.is_negative()) || !h.iter().sum::<Rational>().is_one() {
        return Err(GeometryError::NotOnSimplex);
    }
    Ok(())
}

/// Atoms grouped by their candidate profile `(q_1(x), ..., q_n(x))`. Atoms
/// with equal profiles are interchangeable for every computation here.
#[derive(Debug, Clone)]
pub struct AtomClasses {
    /// Profile of each class.
    pub profiles: Vec<Vec<Rational>>,
    /// Atoms of each class, ascending.
    pub members: Vec<Vec<usize>>,
    pub class_of: Vec<usize>,
}

impl AtomClasses {
    pub fn new(candidates: &[FiniteDistribution]) -> Result<Self, GeometryError> {
        let d = common_domain(candidates)?;
        let mut index: HashMap<Vec<Rational>, usize> = HashMap::new();
        let mut profiles = Vec::new();
        let mut members: Vec<Vec<usize>> = Vec::new();
        let mut class_of = Vec::with_capacity(d);
        for x in 0..d {
            let profile: Vec<Rational> = candidates.iter().map(|q| q.prob(x).clone()).collect();
            let c = *index.entry(profile.clone()).or_insert_with(|| {
                profiles.push(profile);
                members.push(Vec::new());
                profiles.len() - 1
            });
            members[c].push(x);
            class_of.push(c);
        }
        Ok(Self {
            profiles,
            members,
            class_of,
        })
    }

    pub fn len(&self) -> usize {
        self.profiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.profiles.is_empty()
    }

    fn multiplicity(&self, c: usize) -> Rational {
        Rational::from_integer((self.members[c].len() as u64).into())
    }

    /// Distance vector of the distribution with the given per-class levels.
    fn distances(&self, levels: &[Rational]) -> DistanceVector {
        let n = self.profiles.first().map_or(0, Vec::len);
        let two = Rational::from_integer(2.into());
        DistanceVector::new(
            (0..n)
                .map(|i| {
                    self.profiles
                        .iter()
                        .zip(levels)
                        .enumerate()
                        .map(|(c, (profile, level))| (level - &profile[i]).abs() * self.multiplicity(c))
                        .sum::<Rational>()
                        / &two
                })
                .collect(),
        )
    }

    /// Expands per-class values to per-atom values.
    fn expand<T: Clone>(&self, per_class: &[T]) -> Vec<T> {
        self.class_of.iter().map(|c| per_class[*c].clone()).collect()
    }
}

/// Candidate indices sorted by ascending `q_i(x)`, ties by index.
fn fill_order(q_values: &[Rational]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..q_values.len()).collect();
    order.sort_by(|a, b| q_values[*a].cmp(&q_values[*b]).then(a.cmp(b)));
    order
}

/// Exact minimizer of `sum_i h_i TV(p, q_i)` by greedy allocation.
///
/// The objective separates over atoms into convex piecewise-linear costs
/// `t -> sum_i h_i (t - q_i(x))^+`, so mass is poured into segments in order
/// of increasing marginal rate (ties by class, then segment). Atoms sharing a
/// profile receive equal mass.
pub fn tv_best_response(
    candidates: &[FiniteDistribution],
    h: &[Rational],
) -> Result<(Rational, FiniteDistribution), GeometryError> {
    let classes = AtomClasses::new(candidates)?;
    check_simplex(h, candidates.len())?;
    let (value, levels) = best_response_levels(&classes, h);
    Ok((value, FiniteDistribution::from_raw(classes.expand(&levels))))
}

/// Greedy best response as one mass level per atom class.
fn best_response_levels(classes: &AtomClasses, h: &[Rational]) -> (Rational, Vec<Rational>) {
    struct Segment {
        rate: Rational,
        class: usize,
        step: usize,
        /// Per-atom length; `None` for the final unbounded segment.
        length: Option<Rational>,
    }
    let mut segments = Vec::new();
    for (c, profile) in classes.profiles.iter().enumerate() {
        let order = fill_order(profile);
        let mut rate = Rational::zero();
        let mut level = Rational::zero();
        for (step, &i) in order.iter().enumerate() {
            let next = &profile[i];
            if *next > level {
                segments.push(Segment {
                    rate: rate.clone(),
                    class: c,
                    step,
                    length: Some(next - &level),
                });
                level = next.clone();
            }
            rate += &h[i];
        }
        segments.push(Segment {
            rate,
            class: c,
            step: order.len(),
            length: None,
        });
    }
    segments.sort_by(|a, b| {
        a.rate
            .cmp(&b.rate)
            .then(a.class.cmp(&b.class))
            .then(a.step.cmp(&b.step))
    });

    let mut levels = vec![Rational::zero(); classes.len()];
    let mut remaining = Rational::one();
    for seg in &segments {
        if remaining.is_zero() {
            break;
        }
        let mult = classes.multiplicity(seg.class);
        match &seg.length {
            Some(len) if (len * &mult) <= remaining => {
                remaining -= len * &mult;
                levels[seg.class] += len;
            }
            _ => {
                levels[seg.class] += &remaining / &mult;
                remaining = Rational::zero();
            }
        }
    }
    let mut value = Rational::zero();
    for (c, profile) in classes.profiles.iter().enumerate() {
        let mut per_atom = Rational::zero();
        for (hi, qi) in h.iter().zip(profile) {
            if levels[c] > *qi && !hi.is_zero() {
                per_atom += hi * (&levels[c] - qi);
            }
        }
        value += per_atom * classes.multiplicity(c);
    }
    (value, levels)
}

/// `min_p sum_i h_i TV(p, q_i)` from the positive-part LP
/// `min sum_i h_i sum_x s_{i,x}` with `s_{i,x} >= p(x) - q_i(x)`, `s >= 0`,
/// `p` on the simplex.
pub fn support_function_tv(
    candidates: &[FiniteDistribution],
    h: &[Rational],
) -> Result<(Rational, FiniteDistribution), GeometryError> {
    let d = common_domain(candidates)?;
    let n = candidates.len();
    check_simplex(h, n)?;
    let vars = d + n * d;
    let slack = |i: usize, x: usize| d + i * d + x;
    let mut objective = vec![Rational::zero(); vars];
    for i in 0..n {
        for x in 0..d {
            objective[slack(i, x)] = h[i].clone();
        }
    }
    let mut program = LinearProgram::new(Sense::Minimize, objective);
    for (i, q) in candidates.iter().enumerate() {
        for x in 0..d {
            let mut row = vec![Rational::zero(); vars];
            row[slack(i, x)] = Rational::one();
            row[x] = -Rational::one();
            program.constrain(row, Relation::Ge, -q.prob(x).clone());
        }
    }
    let mut mass = vec![Rational::zero(); vars];
    mass[..d].iter_mut().for_each(|v| *v = Rational::one());
    program.constrain(mass, Relation::Eq, Rational::one());
    match lp::solve(&program)? {
        LpOutcome::Optimal { x, value, .. } => {
            let p = FiniteDistribution::new(x[..d].to_vec())?;
            Ok((value, p))
        }
        other => Err(GeometryError::Certificate(format!(
            "support LP returned {:?}",
            other.status()
        ))),
    }
}

/// Greedy per-atom assignment minimizing `sum_i h_i f_i q_i` subject to
/// `sum_i h_i f_i >= lambda`, `f_i in [0, 1]`: fill candidates in ascending
/// order of `q_i(x)` (ties by index) until the weighted sum reaches `lambda`.
pub fn water_fill(q_values: &[Rational], h: &[Rational], lambda: &Rational) -> Vec<Rational> {
    assert_eq!(q_values.len(), h.len(), "one q-value per weight");
    let mut f = vec![Rational::zero(); h.len()];
    let mut prefix = Rational::zero();
    for i in fill_order(q_values) {
        if prefix >= *lambda {
            break;
        }
        let next = &prefix + &h[i];
        if next < *lambda {
            f[i] = Rational::one();
        } else {
            f[i] = (lambda - &prefix) / &h[i];
        }
        prefix = next;
    }
    f
}

/// `lambda - sum_x sum_i h_i f_i^lambda(x) q_i(x)` with `f^lambda` from
/// [`water_fill`], evaluated atom by atom.
pub fn lambda_objective(candidates: &[FiniteDistribution], h: &[Rational], lambda: &Rational) -> Rational {
    let d = candidates[0].domain_size();
    let mut cost = Rational::zero();
    for x in 0..d {
        let q: Vec<Rational> = candidates.iter().map(|c| c.prob(x).clone()).collect();
        let f = water_fill(&q, h, lambda);
        for i in 0..h.len() {
            if !f[i].is_zero() && !q[i].is_zero() && !h[i].is_zero() {
                cost += &h[i] * &f[i] * &q[i];
            }
        }
    }
    lambda - cost
}

/// Breakpoints of the water-filling objective: `{0, 1}` and every prefix sum
/// of `h` in each atom's fill order, ascending and deduplicated.
pub fn lambda_candidates(candidates: &[FiniteDistribution], h: &[Rational]) -> Vec<Rational> {
    let d = candidates[0].domain_size();
    let mut out = vec![Rational::zero(), Rational::one()];
    for x in 0..d {
        let q: Vec<Rational> = candidates.iter().map(|c| c.prob(x).clone()).collect();
        let mut prefix = Rational::zero();
        for i in fill_order(&q) {
            prefix += &h[i];
            out.push(prefix.clone());
        }
    }
    out.sort();
    out.dedup();
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct LambdaChoice {
    pub lambda: Rational,
    pub value: Rational,
}

/// Maximizes [`lambda_objective`] over [`lambda_candidates`] with one sweep;
/// ties go to the smallest `lambda`. The optimum equals the support function
/// at `h`.
pub fn optimal_lambda(candidates: &[FiniteDistribution], h: &[Rational]) -> Result<LambdaChoice, GeometryError> {
    let classes = AtomClasses::new(candidates)?;
    check_simplex(h, candidates.len())?;
    Ok(optimal_lambda_on(&classes, h))
}

fn optimal_lambda_on(classes: &AtomClasses, h: &[Rational]) -> LambdaChoice {
    // On each class the per-atom cost is piecewise linear in lambda with slope
    // q_{sigma(j)} on (P_{j-1}, P_j], over indices with positive weight.
    let mut slope = Rational::one();
    let mut events: Vec<(Rational, Rational)> = Vec::new();
    for (c, profile) in classes.profiles.iter().enumerate() {
        let mult = classes.multiplicity(c);
        let active: Vec<usize> = fill_order(profile)
            .into_iter()
            .filter(|i| !h[*i].is_zero())
            .collect();
        let mut prefix = Rational::zero();
        for (k, &i) in active.iter().enumerate() {
            prefix += &h[i];
            if k == 0 {
                slope -= &profile[i] * &mult;
            }
            if let Some(&next) = active.get(k + 1) {
                let change = (&profile[next] - &profile[i]) * &mult;
                if !change.is_zero() && prefix < Rational::one() {
                    events.push((prefix.clone(), -change));
                }
            }
        }
    }
    events.sort_by(|a, b| a.0.cmp(&b.0));

    let mut best = LambdaChoice {
        lambda: Rational::zero(),
        value: Rational::zero(),
    };
    let mut at = Rational::zero();
    let mut value = Rational::zero();
    let mut idx = 0;
    loop {
        let next = events
            .get(idx)
            .map(|e| e.0.clone())
            .unwrap_or_else(Rational::one);
        value += &slope * (&next - &at);
        at = next;
        if value > best.value {
            best = LambdaChoice {
                lambda: at.clone(),
                value: value.clone(),
            };
        }
        if idx >= events.len() {
            break;
        }
        while idx < events.len() && events[idx].0 == at {
            slope += &events[idx].1;
            idx += 1;
        }
        if slope.is_negative() {
            // concave: nothing beyond improves
            break;
        }
    }
    best
}

/// A nonnegative normal on the simplex and the exact minimum of `h . u`
/// over `Q_TV`.
#[derive(Debug, Clone, PartialEq)]
pub struct Hyperplane {
    pub weights: Vec<Rational>,
    pub support: Rational,
}

impl Hyperplane {
    /// Strictly separates `y` from `Q_TV`.
    pub fn separates(&self, y: &DistanceVector) -> bool {
        y.dot(&self.weights) < self.support
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Separation {
    /// `v(p) <= y` coordinatewise.
    Witness(FiniteDistribution),
    Separator(Hyperplane),
}

impl Separation {
    pub fn is_witness(&self) -> bool {
        matches!(self, Separation::Witness(_))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum SeparationMethod {
    #[default]
    CuttingPlane,
    FarkasLp,
}

/// Membership oracle for `Q_TV` that keeps its pool of cutting distributions
/// between calls. Cuts do not depend on the query point, so repeated queries
/// on one family get cheaper.
///
/// Each query first runs a guided phase: the master game is solved in `f64`,
/// its normal and mixture weights are snapped to a dyadic grid, and the
/// result is accepted only after an exact check (a positive exact margin for
/// a normal, exact domination for a witness). Anything else falls through
/// to the exact cutting-plane loop, so floating point only ever picks which
/// certificate is tried.
#[derive(Debug, Clone)]
pub struct QtvSeparator {
    candidates: Vec<FiniteDistribution>,
    classes: AtomClasses,
    pool: Vec<PoolEntry>,
}

#[derive(Debug, Clone)]
struct PoolEntry {
    /// Per-class mass levels of the pooled distribution.
    levels: Vec<Rational>,
    distances: DistanceVector,
    approx: Vec<f64>,
    /// Consecutive master solves in which this entry carried no weight.
    idle: usize,
}

impl PoolEntry {
    fn new(levels: Vec<Rational>, distances: DistanceVector) -> Self {
        let approx = distances.entries().iter().map(to_f64).collect();
        Self {
            levels,
            distances,
            approx,
            idle: 0,
        }
    }
}

/// Pool entries idle for more than this many master solves are dropped at
/// the start of the next query.
const IDLE_LIMIT: usize = 8;

/// Grid for snapping floating-point weights to rationals.
const SNAP_DENOMINATOR: i64 = 1 << 20;

/// Master game value below which the guided phase tries a witness.
const GUIDED_WITNESS_TOLERANCE: f64 = 1e-9;

/// `max t` s.t. `t <= h . (v_k - y)` for every row `v_k`, `h` on the simplex.
fn master_program<S: lp::Scalar>(rows: &[&[S]], y: &[S]) -> LinearProgram<S> {
    let n = y.len();
    let mut objective = vec![S::zero(); n + 1];
    objective[n] = S::one();
    let mut program = LinearProgram::new(Sense::Maximize, objective);
    program.set_free(n);
    for v in rows {
        let mut row: Vec<S> = v.iter().zip(y).map(|(vk, yk)| yk.sub(vk)).collect();
        row.push(S::one());
        program.constrain(row, Relation::Le, S::zero());
    }
    let mut simplex = vec![S::one(); n];
    simplex.push(S::zero());
    program.constrain(simplex, Relation::Eq, S::one());
    program
}

/// Nearest point of the grid simplex: entries rounded to multiples of
/// `1 / SNAP_DENOMINATOR`, with the rounding residue put on the largest entry.
fn snap_to_simplex(values: &[f64]) -> Option<Vec<Rational>> {
    let scale = SNAP_DENOMINATOR as f64;
    let mut units: Vec<i64> = values
        .iter()
        .map(|v| if v.is_finite() { (v.max(0.0) * scale).round() as i64 } else { 0 })
        .collect();
    let largest = (0..units.len()).max_by_key(|i| units[*i])?;
    let residue = SNAP_DENOMINATOR - units.iter().sum::<i64>();
    units[largest] += residue;
    if units[largest] < 0 {
        return None;
    }
    Some(
        units
            .into_iter()
            .map(|u| Rational::new(u.into(), SNAP_DENOMINATOR.into()))
            .collect(),
    )
}

impl QtvSeparator {
    pub fn new(candidates: &[FiniteDistribution]) -> Result<Self, GeometryError> {
        let classes = AtomClasses::new(candidates)?;
        let pool = (0..candidates.len())
            .map(|i| {
                let levels: Vec<Rational> = classes.profiles.iter().map(|profile| profile[i].clone()).collect();
                let v = classes.distances(&levels);
                PoolEntry::new(levels, v)
            })
            .collect();
        Ok(Self {
            candidates: candidates.to_vec(),
            classes,
            pool,
        })
    }

    pub fn candidates(&self) -> &[FiniteDistribution] {
        &self.candidates
    }

    pub fn classes(&self) -> &AtomClasses {
        &self.classes
    }

    pub fn pool_size(&self) -> usize {
        self.pool.len()
    }

    /// Exact support function and a minimizing distribution.
    pub fn best_response(&self, h: &[Rational]) -> Result<(Rational, FiniteDistribution), GeometryError> {
        check_simplex(h, self.candidates.len())?;
        let (value, levels) = best_response_levels(&self.classes, h);
        Ok((value, FiniteDistribution::from_raw(self.classes.expand(&levels))))
    }

    pub fn separate(&mut self, y: &DistanceVector) -> Result<Separation, GeometryError> {
        let n = self.candidates.len();
        if y.len() != n {
            return Err(GeometryError::DimensionMismatch {
                expected: n,
                found: y.len(),
            });
        }
        self.prune();
        if let Some(found) = self.separate_guided(y) {
            return Ok(found);
        }
        self.separate_exact(y)
    }

    /// Adds a best response to the pool; `false` if its distance vector is
    /// already pooled.
    fn add_cut(&mut self, levels: Vec<Rational>) -> bool {
        let v = self.classes.distances(&levels);
        if self.pool.iter().any(|e| e.distances == v) {
            return false;
        }
        self.pool.push(PoolEntry::new(levels, v));
        true
    }

    fn record_weights(&mut self, weights: &[Rational]) {
        for (entry, w) in self.pool.iter_mut().zip(weights) {
            entry.idle = if w.is_zero() { entry.idle + 1 } else { 0 };
        }
    }

    fn separate_guided(&mut self, y: &DistanceVector) -> Option<Separation> {
        let y_approx: Vec<f64> = y.entries().iter().map(to_f64).collect();
        let rounds = 4 * self.candidates.len() + 16;
        for _ in 0..rounds {
            let rows: Vec<&[f64]> = self.pool.iter().map(|e| e.approx.as_slice()).collect();
            let options = lp::SolveOptions {
                rule: lp::PivotRule::Dantzig,
                ..Default::default()
            };
            let LpOutcome::Optimal { x, value, duals } =
                lp::solve_with(&master_program(&rows, &y_approx), options).ok()?
            else {
                return None;
            };
            let n = y_approx.len();
            if value <= GUIDED_WITNESS_TOLERANCE {
                let weights = snap_to_simplex(&duals[..self.pool.len()])?;
                self.record_weights(&weights);
                return self.witness_from(&weights, y).ok();
            }
            let h = snap_to_simplex(&x[..n])?;
            let (support, levels) = best_response_levels(&self.classes, &h);
            if support > y.dot(&h) {
                return Some(Separation::Separator(Hyperplane { weights: h, support }));
            }
            if !self.add_cut(levels) {
                return None;
            }
        }
        None
    }

    fn separate_exact(&mut self, y: &DistanceVector) -> Result<Separation, GeometryError> {
        loop {
            let (h, t, weights) = self.master(y)?;
            self.record_weights(&weights);
            if !t.is_positive() {
                return self.witness_from(&weights, y);
            }
            let (support, levels) = best_response_levels(&self.classes, &h);
            if support > y.dot(&h) {
                return Ok(Separation::Separator(Hyperplane { weights: h, support }));
            }
            if !self.add_cut(levels) {
                return Err(GeometryError::Certificate(
                    "best response repeated a pooled distance vector".into(),
                ));
            }
        }
    }

    /// Drops long-idle cuts. Only called between queries, so each query
    /// still works with a growing pool and terminates.
    fn prune(&mut self) {
        self.pool.retain(|e| e.idle <= IDLE_LIMIT);
    }

    /// Exact master game. Returns `(h, t, dual weights on the pool)`.
    fn master(&self, y: &DistanceVector) -> Result<(Vec<Rational>, Rational, Vec<Rational>), GeometryError> {
        let n = self.candidates.len();
        let rows: Vec<&[Rational]> = self.pool.iter().map(|e| e.distances.entries()).collect();
        let options = lp::SolveOptions {
            rule: lp::PivotRule::Dantzig,
            ..Default::default()
        };
        match lp::solve_with(&master_program(&rows, y.entries()), options)? {
            LpOutcome::Optimal { x, value, duals } => {
                let weights = duals[..self.pool.len()].to_vec();
                Ok((x[..n].to_vec(), value, weights))
            }
            other => Err(GeometryError::Certificate(format!(
                "master LP returned {:?}",
                other.status()
            ))),
        }
    }

    fn witness_from(&self, weights: &[Rational], y: &DistanceVector) -> Result<Separation, GeometryError> {
        let total: Rational = weights.iter().sum();
        if !total.is_one() || weights.iter().any(|w| w.is_negative()) {
            return Err(GeometryError::Certificate("master weights are not a mixture".into()));
        }
        let mut levels = vec![Rational::zero(); self.classes.len()];
        for (w, entry) in weights.iter().zip(&self.pool) {
            if w.is_positive() {
                for (acc, l) in levels.iter_mut().zip(&entry.levels) {
                    *acc += w * l;
                }
            }
        }
        // Checked on classes: atoms in one class carry the same level, so the
        // per-class sums equal the per-atom ones.
        let total: Rational = levels
            .iter()
            .enumerate()
            .map(|(c, l)| l * self.classes.multiplicity(c))
            .sum();
        if !total.is_one() || levels.iter().any(|l| l.is_negative()) {
            return Err(GeometryError::Certificate("mixed witness is not a distribution".into()));
        }
        let v = self.classes.distances(&levels);
        if !v.dominated_by(y) {
            return Err(GeometryError::Certificate(format!(
                "mixed witness has distances {v:?} above {y:?}"
            )));
        }
        Ok(Separation::Witness(FiniteDistribution::from_raw(self.classes.expand(&levels))))
    }
}

/// Decides `y in Q_TV` with the default method.
pub fn qtv_separate(candidates: &[FiniteDistribution], y: &DistanceVector) -> Result<Separation, GeometryError> {
    qtv_separate_with(candidates, y, SeparationMethod::CuttingPlane)
}

pub fn qtv_separate_with(
    candidates: &[FiniteDistribution],
    y: &DistanceVector,
    method: SeparationMethod,
) -> Result<Separation, GeometryError> {
    match method {
        SeparationMethod::CuttingPlane => QtvSeparator::new(candidates)?.separate(y),
        SeparationMethod::FarkasLp => qtv_separate_lp(candidates, y),
    }
}

/// Single feasibility LP: `p >= 0`, `sum p = 1`, `s_{i,x} >= p(x) - q_i(x)`,
/// `s >= 0`, `sum_x s_{i,x} <= y_i`.
pub fn qtv_separate_lp(candidates: &[FiniteDistribution], y: &DistanceVector) -> Result<Separation, GeometryError> {
    let d = common_domain(candidates)?;
    let n = candidates.len();
    if y.len() != n {
        return Err(GeometryError::DimensionMismatch {
            expected: n,
            found: y.len(),
        });
    }
    let vars = d + n * d;
    let slack = |i: usize, x: usize| d + i * d + x;
    let mut program = LinearProgram::new(Sense::Minimize, vec![Rational::zero(); vars]);
    for (i, q) in candidates.iter().enumerate() {
        for x in 0..d {
            let mut row = vec![Rational::zero(); vars];
            row[slack(i, x)] = Rational::one();
            row[x] = -Rational::one();
            program.constrain(row, Relation::Ge, -q.prob(x).clone());
        }
    }
    let distance_row0 = program.constraints.len();
    for i in 0..n {
        let mut row = vec![Rational::zero(); vars];
        for x in 0..d {
            row[slack(i, x)] = Rational::one();
        }
        program.constrain(row, Relation::Le, y.entries()[i].clone());
    }
    let mut mass = vec![Rational::zero(); vars];
    mass[..d].iter_mut().for_each(|v| *v = Rational::one());
    program.constrain(mass, Relation::Eq, Rational::one());

    match lp::solve(&program)? {
        LpOutcome::Optimal { x, .. } => {
            let p = FiniteDistribution::new(x[..d].to_vec())?;
            let v = distance_vector(&p, candidates)?;
            if !v.dominated_by(y) {
                return Err(GeometryError::Certificate("LP witness violates a distance row".into()));
            }
            Ok(Separation::Witness(p))
        }
        LpOutcome::Infeasible { farkas } => {
            // `<=` rows carry nonpositive multipliers
            let raw: Vec<Rational> = farkas[distance_row0..distance_row0 + n].iter().map(|v| -v).collect();
            let total: Rational = raw.iter().sum();
            if !total.is_positive() {
                return Err(GeometryError::Certificate("Farkas multipliers vanish on distance rows".into()));
            }
            let weights: Vec<Rational> = raw.into_iter().map(|v| v / &total).collect();
            let (support, _) = tv_best_response(candidates, &weights)?;
            let plane = Hyperplane { weights, support };
            if !plane.separates(y) {
                return Err(GeometryError::Certificate(format!(
                    "normalized multipliers do not separate: h.y = {}, support = {}",
                    format_rational(&y.dot(&plane.weights)),
                    format_rational(&plane.support)
                )));
            }
            Ok(Separation::Separator(plane))
        }
        LpOutcome::Unbounded { .. } => Err(GeometryError::Certificate("feasibility LP reported a ray".into())),
    }
}

/// Functions `F_i : X -> [0, 1]` and weights `h` such that for every `p`,
/// `sum_i h_i (E_p[F_i] - E_{q_i}[F_i]) >= game_value > h . y`, and each
/// `E_p[F_i] - E_{q_i}[F_i] <= TV(p, q_i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MinimaxWitness {
    pub hyperplane: Hyperplane,
    pub lambda: Rational,
    pub functions: Vec<ValueTable>,
    /// `E_{q_i}[F_i]`.
    pub baseline: Vec<Rational>,
    pub game_value: Rational,
}

impl MinimaxWitness {
    /// `z_i(p) = E_p[F_i] - E_{q_i}[F_i]`.
    pub fn z(&self, p: &FiniteDistribution) -> Vec<Rational> {
        self.functions
            .iter()
            .zip(&self.baseline)
            .map(|(f, b)| crate::distributions::dot(p.probs(), f.values()) - b)
            .collect()
    }

    /// `z` at the point mass on `x`.
    pub fn z_at_atom(&self, x: usize) -> Vec<Rational> {
        self.functions
            .iter()
            .zip(&self.baseline)
            .map(|(f, b)| &f.values()[x] - b)
            .collect()
    }

    /// Checks every invariant at all vertices of the simplex; linearity makes
    /// this sufficient for all distributions.
    pub fn check(&self, candidates: &[FiniteDistribution], y: &DistanceVector) -> Result<(), String> {
        let h = &self.hyperplane.weights;
        let d = candidates[0].domain_size();
        let hy = y.dot(h);
        if self.game_value <= hy {
            return Err("game value does not exceed h.y".into());
        }
        for x in 0..d {
            let z = self.z_at_atom(x);
            let weighted: Rational = z.iter().zip(h).map(|(a, b)| a * b).sum();
            if weighted < self.game_value {
                return Err(format!("weighted progress below the game value at atom {x}"));
            }
            if weighted <= hy {
                return Err(format!("no strict progress at atom {x}"));
            }
            let vertex = FiniteDistribution::point_mass(d, x);
            for (i, q) in candidates.iter().enumerate() {
                let tv = total_variation(&vertex, q).map_err(|e| e.to_string())?;
                if z[i] > tv {
                    return Err(format!("z_{i} exceeds TV at atom {x}"));
                }
            }
        }
        Ok(())
    }
}

/// Builds the minimax functions for a point outside `Q_TV`.
pub fn minimax_functions(candidates: &[FiniteDistribution], y: &DistanceVector) -> Result<MinimaxWitness, GeometryError> {
    let mut separator = QtvSeparator::new(candidates)?;
    minimax_functions_with(&mut separator, y)
}

/// Same as [`minimax_functions`], reusing a separator's cut pool.
pub fn minimax_functions_with(separator: &mut QtvSeparator, y: &DistanceVector) -> Result<MinimaxWitness, GeometryError> {
    match separator.separate(y)? {
        Separation::Witness(_) => Err(GeometryError::InsideDominatingSet),
        Separation::Separator(plane) => minimax_from_hyperplane(separator, plane),
    }
}

/// Water-filling functions at the optimal `lambda` for a given normal.
pub fn minimax_from_hyperplane(separator: &QtvSeparator, plane: Hyperplane) -> Result<MinimaxWitness, GeometryError> {
    let classes = separator.classes();
    let candidates = separator.candidates();
    let h = &plane.weights;
    let choice = optimal_lambda_on(classes, h);
    if choice.value != plane.support {
        return Err(GeometryError::Certificate(format!(
            "water-filling value {} differs from the support {}",
            format_rational(&choice.value),
            format_rational(&plane.support)
        )));
    }
    let per_class: Vec<Vec<Rational>> = classes
        .profiles
        .iter()
        .map(|profile| water_fill(profile, h, &choice.lambda))
        .collect();
    let n = candidates.len();
    let functions: Vec<ValueTable> = (0..n)
        .map(|i| ValueTable::from_raw(classes.class_of.iter().map(|c| per_class[*c][i].clone()).collect()))
        .collect();
    let baseline = (0..n)
        .map(|i| {
            classes
                .profiles
                .iter()
                .enumerate()
                .filter(|(c, profile)| !profile[i].is_zero() && !per_class[*c][i].is_zero())
                .map(|(c, profile)| &profile[i] * &per_class[c][i] * classes.multiplicity(c))
                .sum()
        })
        .collect();
    Ok(MinimaxWitness {
        game_value: choice.value,
        lambda: choice.lambda,
        functions,
        baseline,
        hyperplane: plane,
    })
}

/// Compares the support function of `Q_TV` with that of `Q_F` for the
/// threshold class `F` built from the Yatracos sets, each from its own LP.
pub fn support_equivalence_check(
    candidates: &[FiniteDistribution],
    h: &[Rational],
) -> Result<bool, GeometryError> {
    let (tv_side, _) = support_function_tv(candidates, h)?;
    if candidates.len() == 1 {
        // no pairs, so F is empty and d_F vanishes identically
        return Ok(tv_side.is_zero());
    }
    let class = crate::yatracos::ThresholdClass::new(candidates)
        .map_err(|e| GeometryError::Certificate(e.to_string()))?;
    let f_side = class
        .support_function(candidates, h)
        .map_err(|e| GeometryError::Certificate(e.to_string()))?;
    Ok(tv_side.cmp(&f_side) == Ordering::Equal)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn deltas() -> Vec<FiniteDistribution> {
        vec![FiniteDistribution::point_mass(2, 0), FiniteDistribution::point_mass(2, 1)]
    }

    fn dv(v: &[(i64, i64)]) -> DistanceVector {
        DistanceVector::new(v.iter().map(|(a, b)| ratio(*a, *b)).collect())
    }

    #[test]
    fn witness_on_two_point_masses() {
        for method in [SeparationMethod::CuttingPlane, SeparationMethod::FarkasLp] {
            let sep = qtv_separate_with(&deltas(), &dv(&[(3, 10), (7, 10)]), method).unwrap();
            assert_eq!(
                sep,
                Separation::Witness(FiniteDistribution::parse(&["7/10", "3/10"]).unwrap()),
                "{method:?}"
            );
        }
    }

    #[test]
    fn separator_on_two_point_masses() {
        for method in [SeparationMethod::CuttingPlane, SeparationMethod::FarkasLp] {
            let y = dv(&[(3, 10), (6, 10)]);
            let Separation::Separator(plane) = qtv_separate_with(&deltas(), &y, method).unwrap() else {
                panic!("expected a separator")
            };
            assert_eq!(plane.weights, vec![ratio(1, 2), ratio(1, 2)]);
            assert_eq!(y.dot(&plane.weights), ratio(9, 20));
            assert_eq!(plane.support, ratio(1, 2));
        }
    }

    #[test]
    fn all_ones_is_always_dominating() {
        let q = vec![
            FiniteDistribution::parse(&["1/2", "1/4", "1/4"]).unwrap(),
            FiniteDistribution::parse(&["0", "0", "1"]).unwrap(),
            FiniteDistribution::parse(&["1/3", "2/3", "0"]).unwrap(),
        ];
        let y = DistanceVector::new(vec![Rational::one(); 3]);
        assert!(qtv_separate(&q, &y).unwrap().is_witness());
    }

    #[test]
    fn support_function_examples() {
        let q = deltas();
        let (v, p) = support_function_tv(&q, &[Rational::one(), Rational::zero()]).unwrap();
        assert_eq!(v, Rational::zero());
        assert_eq!(p, q[0]);
        let (v, _) = support_function_tv(&q, &[ratio(1, 2), ratio(1, 2)]).unwrap();
        assert_eq!(v, ratio(1, 2));
        let (g, _) = tv_best_response(&q, &[ratio(1, 2), ratio(1, 2)]).unwrap();
        assert_eq!(g, ratio(1, 2));
        let single = vec![FiniteDistribution::parse(&["1/5", "4/5"]).unwrap()];
        assert_eq!(support_function_tv(&single, &[Rational::one()]).unwrap().0, Rational::zero());
        assert_eq!(tv_best_response(&single, &[Rational::one()]).unwrap().0, Rational::zero());
    }

    #[test]
    fn water_fill_examples() {
        let q = [ratio(1, 10), ratio(2, 10), ratio(5, 10)];
        let h = [ratio(2, 10), ratio(3, 10), ratio(5, 10)];
        assert_eq!(water_fill(&q, &h, &ratio(4, 10)), vec![Rational::one(), ratio(2, 3), Rational::zero()]);
        assert!(water_fill(&q, &h, &Rational::zero()).iter().all(|f| f.is_zero()));
        assert!(water_fill(&q, &h, &Rational::one()).iter().all(|f| f.is_one()));
        // ties in q fall back to index order
        let tied = [ratio(1, 2), ratio(1, 2)];
        let hw = [ratio(1, 2), ratio(1, 2)];
        assert_eq!(water_fill(&tied, &hw, &ratio(1, 4)), vec![ratio(1, 2), Rational::zero()]);
    }

    #[test]
    fn optimal_lambda_examples() {
        let q = deltas();
        let h = [ratio(1, 2), ratio(1, 2)];
        assert_eq!(lambda_candidates(&q, &h), vec![Rational::zero(), ratio(1, 2), Rational::one()]);
        let choice = optimal_lambda(&q, &h).unwrap();
        assert_eq!(choice, LambdaChoice { lambda: ratio(1, 2), value: ratio(1, 2) });
        let e0 = [Rational::one(), Rational::zero()];
        assert_eq!(optimal_lambda(&q, &e0).unwrap().value, Rational::zero());
    }

    #[test]
    fn minimax_on_two_point_masses() {
        let q = deltas();
        let y = dv(&[(2, 5), (2, 5)]);
        let w = minimax_functions(&q, &y).unwrap();
        assert_eq!(w.hyperplane.weights, vec![ratio(1, 2), ratio(1, 2)]);
        assert_eq!(w.functions[0].values(), &[Rational::zero(), Rational::one()]);
        assert_eq!(w.functions[1].values(), &[Rational::one(), Rational::zero()]);
        assert_eq!(w.game_value, ratio(1, 2));
        w.check(&q, &y).unwrap();
        for (i, qi) in q.iter().enumerate() {
            assert!(w.z(qi)[i] <= Rational::zero());
        }
        assert_eq!(
            minimax_functions(&q, &dv(&[(1, 2), (1, 2)])),
            Err(GeometryError::InsideDominatingSet)
        );
    }

    #[test]
    fn atom_classes_group_equal_profiles() {
        let q = vec![
            FiniteDistribution::parse(&["1/4", "1/4", "1/2"]).unwrap(),
            FiniteDistribution::parse(&["1/6", "1/6", "2/3"]).unwrap(),
        ];
        let classes = AtomClasses::new(&q).unwrap();
        assert_eq!(classes.len(), 2);
        assert_eq!(classes.members, vec![vec![0, 1], vec![2]]);
    }

    #[test]
    fn input_validation() {
        assert_eq!(qtv_separate(&[], &DistanceVector::zeros(0)), Err(GeometryError::EmptyFamily));
        assert!(matches!(
            qtv_separate(&deltas(), &DistanceVector::zeros(3)),
            Err(GeometryError::DimensionMismatch { .. })
        ));
        assert_eq!(
            tv_best_response(&deltas(), &[ratio(1, 2), ratio(1, 3)]),
            Err(GeometryError::NotOnSimplex)
        );
    }
}
