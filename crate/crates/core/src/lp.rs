//! Dense two-phase simplex with optimality duals, Farkas certificates and
//! unbounded rays.
//!
//! The solver works over any [`Scalar`]; with [`Rational`] every pivot is
//! exact and [`verify`] checks the returned certificate by direct
//! arithmetic with zero tolerance. Pivoting follows Bland's rule (lowest
//! eligible column enters, ratio ties leave by lowest basic index), so the
//! outcome is a deterministic function of the program.
//!
//! Certificate conventions, for rows `a_r . x (rel_r) b_r` and bounds
//! `l <= x <= u`:
//!
//! * `Optimal { duals: y }`: with reduced costs `d = c - A^T y`, a
//!   maximization has `y_r >= 0` on `<=` rows and `y_r <= 0` on `>=` rows,
//!   `d_j > 0` only where `x_j` sits at a finite upper bound and `d_j < 0`
//!   only at a finite lower bound. Minimization flips every sign. Nonzero
//!   duals only on tight rows.
//! * `Infeasible { farkas: y }`: `y_r <= 0` on `<=` rows, `y_r >= 0` on `>=`
//!   rows, and `max_{l <= x <= u} (A^T y) . x < y . b`.
//! * `Unbounded { x, ray }`: `x` feasible, `ray` a recession direction with
//!   strictly improving objective.

use std::cmp::Ordering;
use std::fmt::Debug;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::rational::Rational;

/// Field operations the tableau needs. Float implementations compare with a
/// tolerance; exact ones do not.
pub trait Scalar: Clone + Debug + PartialEq + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn div(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Sign, treating values within tolerance of zero as zero.
    fn sign(&self) -> Ordering;
    fn cmp_tol(&self, other: &Self) -> Ordering {
        self.sub(other).sign()
    }
    fn from_rational(value: &Rational) -> Self;
    fn is_exact() -> bool;

    fn is_zero_tol(&self) -> bool {
        self.sign() == Ordering::Equal
    }
    fn is_pos(&self) -> bool {
        self.sign() == Ordering::Greater
    }
    fn is_neg(&self) -> bool {
        self.sign() == Ordering::Less
    }
}

impl Scalar for Rational {
    fn zero() -> Self {
        <Rational as Zero>::zero()
    }
    fn one() -> Self {
        <Rational as One>::one()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn div(&self, other: &Self) -> Self {
        self / other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn sign(&self) -> Ordering {
        if self.is_positive() {
            Ordering::Greater
        } else if self.is_negative() {
            Ordering::Less
        } else {
            Ordering::Equal
        }
    }
    fn cmp_tol(&self, other: &Self) -> Ordering {
        self.cmp(other)
    }
    fn from_rational(value: &Rational) -> Self {
        value.clone()
    }
    fn is_exact() -> bool {
        true
    }
}

/// Absolute tolerance for float pivots and checks.
pub const FLOAT_TOLERANCE: f64 = 1e-9;

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn div(&self, other: &Self) -> Self {
        self / other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn sign(&self) -> Ordering {
        if *self > FLOAT_TOLERANCE {
            Ordering::Greater
        } else if *self < -FLOAT_TOLERANCE {
            Ordering::Less
        } else {
            Ordering::Equal
        }
    }
    fn from_rational(value: &Rational) -> Self {
        crate::rational::to_f64(value)
    }
    fn is_exact() -> bool {
        false
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Maximize,
    Minimize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint<S> {
    pub coeffs: Vec<S>,
    pub relation: Relation,
    pub rhs: S,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Bound<S> {
    pub lower: Option<S>,
    pub upper: Option<S>,
}

impl<S: Scalar> Bound<S> {
    pub fn nonnegative() -> Self {
        Self {
            lower: Some(S::zero()),
            upper: None,
        }
    }

    pub fn free() -> Self {
        Self {
            lower: None,
            upper: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram<S> {
    pub sense: Sense,
    pub objective: Vec<S>,
    pub constraints: Vec<Constraint<S>>,
    pub bounds: Vec<Bound<S>>,
}

impl<S: Scalar> LinearProgram<S> {
    /// A program over nonnegative variables, one per objective coefficient.
    pub fn new(sense: Sense, objective: Vec<S>) -> Self {
        let bounds = vec![Bound::nonnegative(); objective.len()];
        Self {
            sense,
            objective,
            constraints: Vec::new(),
            bounds,
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn constrain(&mut self, coeffs: Vec<S>, relation: Relation, rhs: S) -> &mut Self {
        self.constraints.push(Constraint {
            coeffs,
            relation,
            rhs,
        });
        self
    }

    pub fn set_bounds(&mut self, var: usize, lower: Option<S>, upper: Option<S>) -> &mut Self {
        self.bounds[var] = Bound { lower, upper };
        self
    }

    pub fn set_free(&mut self, var: usize) -> &mut Self {
        self.set_bounds(var, None, None)
    }

    fn validate(&self) -> Result<(), LpError> {
        let n = self.num_vars();
        if self.bounds.len() != n {
            return Err(LpError::DimensionMismatch {
                what: "bounds",
                expected: n,
                found: self.bounds.len(),
            });
        }
        if let Some(row) = self.constraints.iter().find(|c| c.coeffs.len() != n) {
            return Err(LpError::DimensionMismatch {
                what: "constraint row",
                expected: n,
                found: row.coeffs.len(),
            });
        }
        for (var, b) in self.bounds.iter().enumerate() {
            if let (Some(l), Some(u)) = (&b.lower, &b.upper) {
                if l.cmp_tol(u) == Ordering::Greater {
                    return Err(LpError::InconsistentBounds { var });
                }
            }
        }
        Ok(())
    }

    fn row_activity(&self, row: usize, x: &[S]) -> S {
        dot(&self.constraints[row].coeffs, x)
    }

    /// Objective value at `x`.
    pub fn evaluate(&self, x: &[S]) -> S {
        dot(&self.objective, x)
    }

    /// Feasibility of `x` (exact for rationals, within tolerance for floats).
    pub fn is_feasible(&self, x: &[S]) -> bool {
        if x.len() != self.num_vars() {
            return false;
        }
        let bounds_ok = self.bounds.iter().zip(x).all(|(b, v)| {
            b.lower.as_ref().is_none_or(|l| v.cmp_tol(l) != Ordering::Less)
                && b.upper.as_ref().is_none_or(|u| v.cmp_tol(u) != Ordering::Greater)
        });
        bounds_ok
            && (0..self.constraints.len()).all(|r| {
                let c = &self.constraints[r];
                let ord = self.row_activity(r, x).cmp_tol(&c.rhs);
                match c.relation {
                    Relation::Le => ord != Ordering::Greater,
                    Relation::Ge => ord != Ordering::Less,
                    Relation::Eq => ord == Ordering::Equal,
                }
            })
    }
}

impl LinearProgram<Rational> {
    /// The same program over another scalar type.
    pub fn convert<S: Scalar>(&self) -> LinearProgram<S> {
        let conv = |v: &[Rational]| v.iter().map(S::from_rational).collect::<Vec<_>>();
        LinearProgram {
            sense: self.sense,
            objective: conv(&self.objective),
            constraints: self
                .constraints
                .iter()
                .map(|c| Constraint {
                    coeffs: conv(&c.coeffs),
                    relation: c.relation,
                    rhs: S::from_rational(&c.rhs),
                })
                .collect(),
            bounds: self
                .bounds
                .iter()
                .map(|b| Bound {
                    lower: b.lower.as_ref().map(S::from_rational),
                    upper: b.upper.as_ref().map(S::from_rational),
                })
                .collect(),
        }
    }
}

fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    let mut acc = S::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero_tol() && !y.is_zero_tol() {
            acc = acc.add(&x.mul(y));
        }
    }
    acc
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome<S> {
    Optimal { x: Vec<S>, value: S, duals: Vec<S> },
    Infeasible { farkas: Vec<S> },
    Unbounded { x: Vec<S>, ray: Vec<S> },
}

impl<S> LpOutcome<S> {
    pub fn status(&self) -> LpStatus {
        match self {
            LpOutcome::Optimal { .. } => LpStatus::Optimal,
            LpOutcome::Infeasible { .. } => LpStatus::Infeasible,
            LpOutcome::Unbounded { .. } => LpStatus::Unbounded,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LpError {
    #[error("{what} has length {found}, expected {expected}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("variable {var} has lower bound above its upper bound")]
    InconsistentBounds { var: usize },
    #[error("simplex stalled after {iterations} pivots")]
    Stalled { iterations: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PivotRule {
    /// Lowest-index improving column; never cycles.
    Bland,
    /// Most negative reduced cost, falling back to Bland after a run of
    /// degenerate pivots.
    Dantzig,
}

#[derive(Debug, Clone, Copy)]
pub struct SolveOptions {
    pub rule: PivotRule,
    pub max_pivots: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            rule: PivotRule::Bland,
            max_pivots: 1_000_000,
        }
    }
}

pub fn solve<S: Scalar>(lp: &LinearProgram<S>) -> Result<LpOutcome<S>, LpError> {
    solve_with(lp, SolveOptions::default())
}

pub fn solve_with<S: Scalar>(lp: &LinearProgram<S>, options: SolveOptions) -> Result<LpOutcome<S>, LpError> {
    lp.validate()?;
    Tableau::build(lp).run(lp, options)
}

#[derive(Debug, Clone)]
enum VarMap<S> {
    /// `x = lower + x'`
    Shift(S),
    /// `x = upper - x'`
    Flip(S),
    /// `x = x'+ - x'-`
    Split,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ColumnKind {
    Structural,
    Slack,
    Artificial,
}

struct Tableau<S> {
    rows: Vec<Vec<S>>,
    rhs: Vec<S>,
    basis: Vec<usize>,
    kinds: Vec<ColumnKind>,
    /// Column holding `e_r` in the starting basis, for reading `B^{-1}`.
    identity_col: Vec<usize>,
    /// `+1` or `-1` applied to each original row when making its rhs nonnegative.
    row_sign: Vec<bool>,
    var_maps: Vec<VarMap<S>>,
    /// First internal column of each original variable.
    var_cols: Vec<usize>,
    /// Internal minimization costs.
    cost: Vec<S>,
    num_original_rows: usize,
}

impl<S: Scalar> Tableau<S> {
    fn build(lp: &LinearProgram<S>) -> Self {
        let n = lp.num_vars();
        let mut var_maps = Vec::with_capacity(n);
        let mut var_cols = Vec::with_capacity(n);
        let mut structural = 0usize;
        // extra rows `x' <= u - l` for doubly bounded variables
        let mut bound_rows: Vec<(usize, S)> = Vec::new();
        for b in &lp.bounds {
            var_cols.push(structural);
            match (&b.lower, &b.upper) {
                (Some(l), upper) => {
                    if let Some(u) = upper {
                        bound_rows.push((structural, u.sub(l)));
                    }
                    var_maps.push(VarMap::Shift(l.clone()));
                    structural += 1;
                }
                (None, Some(u)) => {
                    var_maps.push(VarMap::Flip(u.clone()));
                    structural += 1;
                }
                (None, None) => {
                    var_maps.push(VarMap::Split);
                    structural += 2;
                }
            }
        }

        // rows in internal coordinates, before sign normalization
        let mut raw_rows: Vec<(Vec<S>, Relation, S)> = Vec::new();
        for c in &lp.constraints {
            let mut row = vec![S::zero(); structural];
            let mut rhs = c.rhs.clone();
            for (j, a) in c.coeffs.iter().enumerate() {
                if a.is_zero_tol() && S::is_exact() {
                    continue;
                }
                let col = var_cols[j];
                match &var_maps[j] {
                    VarMap::Shift(l) => {
                        row[col] = a.clone();
                        rhs = rhs.sub(&a.mul(l));
                    }
                    VarMap::Flip(u) => {
                        row[col] = a.neg();
                        rhs = rhs.sub(&a.mul(u));
                    }
                    VarMap::Split => {
                        row[col] = a.clone();
                        row[col + 1] = a.neg();
                    }
                }
            }
            raw_rows.push((row, c.relation, rhs));
        }
        for (col, width) in bound_rows {
            let mut row = vec![S::zero(); structural];
            row[col] = S::one();
            raw_rows.push((row, Relation::Le, width));
        }

        let m = raw_rows.len();
        let mut row_sign = Vec::with_capacity(m);
        let mut normalized = Vec::with_capacity(m);
        for (row, rel, rhs) in raw_rows {
            if rhs.is_neg() {
                let flipped = match rel {
                    Relation::Le => Relation::Ge,
                    Relation::Ge => Relation::Le,
                    Relation::Eq => Relation::Eq,
                };
                normalized.push((row.iter().map(S::neg).collect::<Vec<_>>(), flipped, rhs.neg()));
                row_sign.push(false);
            } else {
                normalized.push((row, rel, rhs));
                row_sign.push(true);
            }
        }

        let slack_count = normalized.iter().filter(|(_, r, _)| *r != Relation::Eq).count();
        let art_count = normalized.iter().filter(|(_, r, _)| *r != Relation::Le).count();
        let width = structural + slack_count + art_count;
        let mut kinds = vec![ColumnKind::Structural; structural];
        kinds.extend(std::iter::repeat_n(ColumnKind::Slack, slack_count));
        kinds.extend(std::iter::repeat_n(ColumnKind::Artificial, art_count));

        let mut rows = Vec::with_capacity(m);
        let mut rhs_col = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let mut identity_col = Vec::with_capacity(m);
        let mut next_slack = structural;
        let mut next_art = structural + slack_count;
        for (row, rel, rhs) in normalized {
            let mut full = row;
            full.resize(width, S::zero());
            match rel {
                Relation::Le => {
                    full[next_slack] = S::one();
                    basis.push(next_slack);
                    identity_col.push(next_slack);
                    next_slack += 1;
                }
                Relation::Ge => {
                    full[next_slack] = S::one().neg();
                    next_slack += 1;
                    full[next_art] = S::one();
                    basis.push(next_art);
                    identity_col.push(next_art);
                    next_art += 1;
                }
                Relation::Eq => {
                    full[next_art] = S::one();
                    basis.push(next_art);
                    identity_col.push(next_art);
                    next_art += 1;
                }
            }
            rows.push(full);
            rhs_col.push(rhs);
        }

        let mut cost = vec![S::zero(); width];
        for (j, c) in lp.objective.iter().enumerate() {
            let c = match lp.sense {
                Sense::Minimize => c.clone(),
                Sense::Maximize => c.neg(),
            };
            let col = var_cols[j];
            match var_maps[j] {
                VarMap::Shift(_) => cost[col] = c,
                VarMap::Flip(_) => cost[col] = c.neg(),
                VarMap::Split => {
                    cost[col + 1] = c.neg();
                    cost[col] = c;
                }
            }
        }

        Self {
            rows,
            rhs: rhs_col,
            basis,
            kinds,
            identity_col,
            row_sign,
            var_maps,
            var_cols,
            cost,
            num_original_rows: lp.constraints.len(),
        }
    }

    fn width(&self) -> usize {
        self.kinds.len()
    }

    fn reduced_costs(&self, cost: &[S]) -> Vec<S> {
        let mut reduced = cost.to_vec();
        for (i, row) in self.rows.iter().enumerate() {
            let cb = &cost[self.basis[i]];
            if cb.is_zero_tol() {
                continue;
            }
            for (j, a) in row.iter().enumerate() {
                if !a.is_zero_tol() {
                    reduced[j] = reduced[j].sub(&cb.mul(a));
                }
            }
        }
        reduced
    }

    fn objective_value(&self, cost: &[S]) -> S {
        let mut value = S::zero();
        for (i, b) in self.basis.iter().enumerate() {
            if !cost[*b].is_zero_tol() {
                value = value.add(&cost[*b].mul(&self.rhs[i]));
            }
        }
        value
    }

    fn pivot(&mut self, prow: usize, pcol: usize, reduced: &mut [S]) {
        let pivot = self.rows[prow][pcol].clone();
        let inv = S::one().div(&pivot);
        for v in self.rows[prow].iter_mut() {
            if !v.is_zero_tol() {
                *v = v.mul(&inv);
            }
        }
        self.rows[prow][pcol] = S::one();
        self.rhs[prow] = self.rhs[prow].mul(&inv);
        let nonzero: Vec<usize> = (0..self.width())
            .filter(|j| !self.rows[prow][*j].is_zero_tol())
            .collect();
        let pivot_row = self.rows[prow].clone();
        let pivot_rhs = self.rhs[prow].clone();
        for i in 0..self.rows.len() {
            if i == prow {
                continue;
            }
            let factor = self.rows[i][pcol].clone();
            if factor.is_zero_tol() {
                continue;
            }
            let row = &mut self.rows[i];
            for &j in &nonzero {
                row[j] = row[j].sub(&factor.mul(&pivot_row[j]));
            }
            row[pcol] = S::zero();
            self.rhs[i] = self.rhs[i].sub(&factor.mul(&pivot_rhs));
        }
        let factor = reduced[pcol].clone();
        if !factor.is_zero_tol() {
            for &j in &nonzero {
                reduced[j] = reduced[j].sub(&factor.mul(&pivot_row[j]));
            }
            reduced[pcol] = S::zero();
        }
        self.basis[prow] = pcol;
    }

    fn ratio_row(&self, col: usize) -> Option<usize> {
        let mut best: Option<(usize, S)> = None;
        for i in 0..self.rows.len() {
            let a = &self.rows[i][col];
            if !a.is_pos() {
                continue;
            }
            let ratio = self.rhs[i].div(a);
            best = match best {
                None => Some((i, ratio)),
                Some((bi, br)) => match ratio.cmp_tol(&br) {
                    Ordering::Less => Some((i, ratio)),
                    Ordering::Equal if self.basis[i] < self.basis[bi] => Some((i, ratio)),
                    _ => Some((bi, br)),
                },
            };
        }
        best.map(|(i, _)| i)
    }

    /// Runs simplex iterations on `cost`. Returns `Some(col)` with an
    /// unbounded entering column, `None` at optimality.
    fn iterate(
        &mut self,
        cost: &[S],
        allow_artificial: bool,
        options: SolveOptions,
        pivots: &mut usize,
    ) -> Result<Option<usize>, LpError> {
        let mut reduced = self.reduced_costs(cost);
        let mut degenerate_run = 0usize;
        loop {
            let eligible = |j: usize| allow_artificial || self.kinds[j] != ColumnKind::Artificial;
            let use_bland = options.rule == PivotRule::Bland || degenerate_run > 50;
            let entering = if use_bland {
                (0..self.width()).find(|&j| eligible(j) && reduced[j].is_neg())
            } else {
                let mut best: Option<usize> = None;
                for j in 0..self.width() {
                    if eligible(j) && reduced[j].is_neg() {
                        best = match best {
                            Some(b) if reduced[b].cmp_tol(&reduced[j]) != Ordering::Greater => Some(b),
                            _ => Some(j),
                        };
                    }
                }
                best
            };
            let Some(col) = entering else {
                return Ok(None);
            };
            let Some(row) = self.ratio_row(col) else {
                return Ok(Some(col));
            };
            if *pivots >= options.max_pivots {
                return Err(LpError::Stalled { iterations: *pivots });
            }
            if self.rhs[row].is_zero_tol() {
                degenerate_run += 1;
            } else {
                degenerate_run = 0;
            }
            self.pivot(row, col, &mut reduced);
            *pivots += 1;
        }
    }

    /// `c_B^T B^{-1}`, one entry per internal row.
    fn row_duals(&self, cost: &[S]) -> Vec<S> {
        (0..self.rows.len())
            .map(|r| {
                let col = self.identity_col[r];
                let mut acc = S::zero();
                for (i, b) in self.basis.iter().enumerate() {
                    let a = &self.rows[i][col];
                    if !a.is_zero_tol() && !cost[*b].is_zero_tol() {
                        acc = acc.add(&cost[*b].mul(a));
                    }
                }
                acc
            })
            .collect()
    }

    fn internal_point(&self) -> Vec<S> {
        let mut x = vec![S::zero(); self.width()];
        for (i, b) in self.basis.iter().enumerate() {
            x[*b] = self.rhs[i].clone();
        }
        x
    }

    fn to_original(&self, internal: &[S], with_offset: bool) -> Vec<S> {
        self.var_maps
            .iter()
            .zip(&self.var_cols)
            .map(|(map, &col)| match map {
                VarMap::Shift(l) => {
                    if with_offset {
                        l.add(&internal[col])
                    } else {
                        internal[col].clone()
                    }
                }
                VarMap::Flip(u) => {
                    if with_offset {
                        u.sub(&internal[col])
                    } else {
                        internal[col].neg()
                    }
                }
                VarMap::Split => internal[col].sub(&internal[col + 1]),
            })
            .collect()
    }

    fn original_multipliers(&self, internal: &[S], negate: bool) -> Vec<S> {
        (0..self.num_original_rows)
            .map(|r| {
                let v = if self.row_sign[r] {
                    internal[r].clone()
                } else {
                    internal[r].neg()
                };
                if negate {
                    v.neg()
                } else {
                    v
                }
            })
            .collect()
    }

    fn run(mut self, lp: &LinearProgram<S>, options: SolveOptions) -> Result<LpOutcome<S>, LpError> {
        let mut pivots = 0usize;
        let has_artificial = self.kinds.contains(&ColumnKind::Artificial);
        if has_artificial {
            let phase1: Vec<S> = self
                .kinds
                .iter()
                .map(|k| if *k == ColumnKind::Artificial { S::one() } else { S::zero() })
                .collect();
            // phase one is bounded below by zero, so it never reports a ray
            let _ = self.iterate(&phase1, true, options, &mut pivots)?;
            if self.objective_value(&phase1).is_pos() {
                let y = self.row_duals(&phase1);
                return Ok(LpOutcome::Infeasible {
                    farkas: self.original_multipliers(&y, false),
                });
            }
            self.drive_out_artificials();
        }
        let cost = self.cost.clone();
        if let Some(col) = self.iterate(&cost, false, options, &mut pivots)? {
            let mut ray_internal = vec![S::zero(); self.width()];
            ray_internal[col] = S::one();
            for (i, b) in self.basis.iter().enumerate() {
                ray_internal[*b] = self.rows[i][col].neg();
            }
            let x = self.to_original(&self.internal_point(), true);
            let ray = self.to_original(&ray_internal, false);
            return Ok(LpOutcome::Unbounded { x, ray });
        }
        let x = self.to_original(&self.internal_point(), true);
        let value = lp.evaluate(&x);
        let y = self.row_duals(&cost);
        let duals = self.original_multipliers(&y, lp.sense == Sense::Maximize);
        Ok(LpOutcome::Optimal { x, value, duals })
    }

    fn drive_out_artificials(&mut self) {
        let mut scratch = vec![S::zero(); self.width()];
        for i in 0..self.rows.len() {
            if self.kinds[self.basis[i]] != ColumnKind::Artificial {
                continue;
            }
            let col = (0..self.width())
                .find(|&j| self.kinds[j] != ColumnKind::Artificial && !self.rows[i][j].is_zero_tol());
            if let Some(col) = col {
                self.pivot(i, col, &mut scratch);
            }
        }
    }
}

/// Checks an outcome against the program by direct arithmetic.
pub fn verify<S: Scalar>(lp: &LinearProgram<S>, outcome: &LpOutcome<S>) -> bool {
    if lp.validate().is_err() {
        return false;
    }
    match outcome {
        LpOutcome::Optimal { x, value, duals } => verify_optimal(lp, x, value, duals),
        LpOutcome::Infeasible { farkas } => verify_farkas(lp, farkas),
        LpOutcome::Unbounded { x, ray } => verify_ray(lp, x, ray),
    }
}

fn verify_optimal<S: Scalar>(lp: &LinearProgram<S>, x: &[S], value: &S, duals: &[S]) -> bool {
    if !lp.is_feasible(x) || duals.len() != lp.constraints.len() {
        return false;
    }
    if lp.evaluate(x).cmp_tol(value) != Ordering::Equal {
        return false;
    }
    // orientation: +1 when the row dual should be >= 0 on `<=` rows
    let maximize = lp.sense == Sense::Maximize;
    for (r, (c, y)) in lp.constraints.iter().zip(duals).enumerate() {
        let sign_ok = match (c.relation, maximize) {
            (Relation::Eq, _) => true,
            (Relation::Le, true) | (Relation::Ge, false) => !y.is_neg(),
            (Relation::Ge, true) | (Relation::Le, false) => !y.is_pos(),
        };
        if !sign_ok {
            return false;
        }
        if !y.is_zero_tol() && lp.row_activity(r, x).cmp_tol(&c.rhs) != Ordering::Equal {
            return false;
        }
    }
    for (j, b) in lp.bounds.iter().enumerate() {
        let mut d = lp.objective[j].clone();
        for (c, y) in lp.constraints.iter().zip(duals) {
            if !y.is_zero_tol() && !c.coeffs[j].is_zero_tol() {
                d = d.sub(&y.mul(&c.coeffs[j]));
            }
        }
        let (push_up, push_down) = if maximize {
            (d.is_pos(), d.is_neg())
        } else {
            (d.is_neg(), d.is_pos())
        };
        if push_up && !matches!(&b.upper, Some(u) if x[j].cmp_tol(u) == Ordering::Equal) {
            return false;
        }
        if push_down && !matches!(&b.lower, Some(l) if x[j].cmp_tol(l) == Ordering::Equal) {
            return false;
        }
    }
    true
}

fn verify_farkas<S: Scalar>(lp: &LinearProgram<S>, y: &[S]) -> bool {
    if y.len() != lp.constraints.len() {
        return false;
    }
    let mut combined = vec![S::zero(); lp.num_vars()];
    let mut rhs = S::zero();
    for (c, yr) in lp.constraints.iter().zip(y) {
        let sign_ok = match c.relation {
            Relation::Eq => true,
            Relation::Le => !yr.is_pos(),
            Relation::Ge => !yr.is_neg(),
        };
        if !sign_ok {
            return false;
        }
        if yr.is_zero_tol() {
            continue;
        }
        rhs = rhs.add(&yr.mul(&c.rhs));
        for (acc, a) in combined.iter_mut().zip(&c.coeffs) {
            if !a.is_zero_tol() {
                *acc = acc.add(&yr.mul(a));
            }
        }
    }
    // maximum of the aggregated row over the variable box
    let mut box_max = S::zero();
    for (cj, b) in combined.iter().zip(&lp.bounds) {
        let term = match cj.sign() {
            Ordering::Equal => continue,
            Ordering::Greater => match &b.upper {
                Some(u) => cj.mul(u),
                None => return false,
            },
            Ordering::Less => match &b.lower {
                Some(l) => cj.mul(l),
                None => return false,
            },
        };
        box_max = box_max.add(&term);
    }
    box_max.cmp_tol(&rhs) == Ordering::Less
}

fn verify_ray<S: Scalar>(lp: &LinearProgram<S>, x: &[S], ray: &[S]) -> bool {
    if !lp.is_feasible(x) || ray.len() != lp.num_vars() {
        return false;
    }
    for c in &lp.constraints {
        let ok = match (c.relation, dot(&c.coeffs, ray).sign()) {
            (Relation::Le, s) => s != Ordering::Greater,
            (Relation::Ge, s) => s != Ordering::Less,
            (Relation::Eq, s) => s == Ordering::Equal,
        };
        if !ok {
            return false;
        }
    }
    for (r, b) in ray.iter().zip(&lp.bounds) {
        if (r.is_neg() && b.lower.is_some()) || (r.is_pos() && b.upper.is_some()) {
            return false;
        }
    }
    match lp.sense {
        Sense::Maximize => lp.evaluate(ray).is_pos(),
        Sense::Minimize => lp.evaluate(ray).is_neg(),
    }
}
