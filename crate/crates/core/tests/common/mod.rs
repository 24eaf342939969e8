//! Independent reference oracles and generators shared by the integration
//! tests. Nothing here calls the simplex code.

#![allow(dead_code)]

use densel::distributions::FiniteDistribution;
use densel::lp::{LinearProgram, LpStatus, Relation, Sense};
use densel::rational::{int, Rational};
use num_traits::{One, Signed, Zero};
use rand::Rng;

#[allow(unused_imports)]
pub use densel::harness::{random_distribution, random_family};
#[allow(unused_imports)]
pub use densel::lowerbound::trial_rng as rng_for;

/// Random program with 1..=3 variables and 1..=3 rows, small integer data,
/// occasional free variables and upper bounds.
pub fn random_lp<R: Rng + ?Sized>(rng: &mut R) -> LinearProgram<Rational> {
    let vars = rng.gen_range(1..=3);
    let rows = rng.gen_range(1..=3);
    let sense = if rng.gen_bool(0.5) { Sense::Maximize } else { Sense::Minimize };
    let objective = (0..vars).map(|_| int(rng.gen_range(-3..=3))).collect();
    let mut lp = LinearProgram::new(sense, objective);
    for _ in 0..rows {
        let row = (0..vars).map(|_| int(rng.gen_range(-3..=3))).collect();
        let relation = match rng.gen_range(0..3) {
            0 => Relation::Le,
            1 => Relation::Ge,
            _ => Relation::Eq,
        };
        lp.constrain(row, relation, int(rng.gen_range(-4..=4)));
    }
    for v in 0..vars {
        match rng.gen_range(0..6) {
            0 => {
                lp.set_free(v);
            }
            1 => {
                lp.set_bounds(v, Some(Rational::zero()), Some(int(rng.gen_range(0..=3))));
            }
            2 => {
                lp.set_bounds(v, Some(int(rng.gen_range(-2..=1))), None);
            }
            _ => {}
        }
    }
    lp
}

/// Reference answer from vertex enumeration.
#[derive(Debug, Clone, PartialEq)]
pub enum Reference {
    Infeasible,
    Unbounded,
    Optimal(Rational),
}

impl Reference {
    pub fn status(&self) -> LpStatus {
        match self {
            Reference::Infeasible => LpStatus::Infeasible,
            Reference::Unbounded => LpStatus::Unbounded,
            Reference::Optimal(_) => LpStatus::Optimal,
        }
    }
}

struct Row {
    a: Vec<Rational>,
    rel: Relation,
    b: Rational,
}

fn satisfies(row: &Row, x: &[Rational]) -> bool {
    let lhs: Rational = row.a.iter().zip(x).map(|(a, v)| a * v).sum();
    match row.rel {
        Relation::Le => lhs <= row.b,
        Relation::Ge => lhs >= row.b,
        Relation::Eq => lhs == row.b,
    }
}

/// Unique solution of a square system by Gauss-Jordan elimination.
fn solve_square(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).find(|r| !a[*r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = Rational::one() / &a[col][col];
        for c in col..n {
            a[col][c] = &a[col][c] * &inv;
        }
        b[col] = &b[col] * &inv;
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let factor = a[r][col].clone();
                for c in col..n {
                    let delta = &factor * &a[col][c];
                    a[r][c] -= delta;
                }
                let delta = &factor * &b[col];
                b[r] -= delta;
            }
        }
    }
    Some(b)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Every basic feasible point of `{x : rows}` in dimension `dim`.
fn vertices(rows: &[Row], dim: usize) -> Vec<Vec<Rational>> {
    let mut out: Vec<Vec<Rational>> = Vec::new();
    for subset in combinations(rows.len(), dim) {
        let a = subset.iter().map(|&r| rows[r].a.clone()).collect();
        let b = subset.iter().map(|&r| rows[r].b.clone()).collect();
        if let Some(x) = solve_square(a, b) {
            if rows.iter().all(|r| satisfies(r, &x)) && !out.contains(&x) {
                out.push(x);
            }
        }
    }
    out
}

/// Solves `lp` by enumerating vertices of an equivalent pointed polyhedron
/// (variables without a lower bound are split into two nonnegative parts)
/// and the extreme rays of its recession cone.
pub fn vertex_enumeration(lp: &LinearProgram<Rational>) -> Reference {
    // column map: original variable -> list of (new column, sign)
    let mut columns: Vec<Vec<(usize, i64)>> = Vec::new();
    let mut dim = 0;
    let mut lower_rows: Vec<(usize, Rational)> = Vec::new();
    for b in &lp.bounds {
        match &b.lower {
            Some(l) => {
                columns.push(vec![(dim, 1)]);
                lower_rows.push((dim, l.clone()));
                dim += 1;
            }
            None => {
                columns.push(vec![(dim, 1), (dim + 1, -1)]);
                lower_rows.push((dim, Rational::zero()));
                lower_rows.push((dim + 1, Rational::zero()));
                dim += 2;
            }
        }
    }
    let expand = |coeffs: &[Rational]| {
        let mut a = vec![Rational::zero(); dim];
        for (v, c) in coeffs.iter().enumerate() {
            for &(col, sign) in &columns[v] {
                a[col] += c * int(sign);
            }
        }
        a
    };
    let mut rows: Vec<Row> = lp
        .constraints
        .iter()
        .map(|c| Row {
            a: expand(&c.coeffs),
            rel: c.relation,
            b: c.rhs.clone(),
        })
        .collect();
    for (v, b) in lp.bounds.iter().enumerate() {
        if let Some(u) = &b.upper {
            let mut unit = vec![Rational::zero(); lp.num_vars()];
            unit[v] = Rational::one();
            rows.push(Row {
                a: expand(&unit),
                rel: Relation::Le,
                b: u.clone(),
            });
        }
    }
    for (col, l) in &lower_rows {
        let mut a = vec![Rational::zero(); dim];
        a[*col] = Rational::one();
        rows.push(Row {
            a,
            rel: Relation::Ge,
            b: l.clone(),
        });
    }
    let c = expand(&lp.objective);
    let value = |x: &[Rational]| -> Rational { c.iter().zip(x).map(|(a, v)| a * v).sum() };
    let better = |a: &Rational, b: &Rational| match lp.sense {
        Sense::Maximize => a > b,
        Sense::Minimize => a < b,
    };

    let points = vertices(&rows, dim);
    if points.is_empty() {
        return Reference::Infeasible;
    }
    // recession cone: homogeneous rows (every column is bounded below, so
    // rays are nonnegative and can be normalized to sum 1)
    let mut cone: Vec<Row> = rows
        .iter()
        .map(|r| Row {
            a: r.a.clone(),
            rel: r.rel,
            b: Rational::zero(),
        })
        .collect();
    cone.push(Row {
        a: vec![Rational::one(); dim],
        rel: Relation::Eq,
        b: Rational::one(),
    });
    if vertices(&cone, dim)
        .iter()
        .any(|r| better(&value(r), &Rational::zero()))
    {
        return Reference::Unbounded;
    }
    let mut best = value(&points[0]);
    for p in &points[1..] {
        let v = value(p);
        if better(&v, &best) {
            best = v;
        }
    }
    Reference::Optimal(best)
}

/// `min sum_i h_i q_i f_i` subject to `sum_i h_i f_i >= lambda`, `f in [0,1]^n`,
/// by enumerating the points with at most one fractional coordinate.
/// `None` when infeasible.
pub fn knapsack_min(q: &[Rational], h: &[Rational], lambda: &Rational) -> Option<Rational> {
    let n = h.len();
    let cost = |f: &[Rational]| -> Rational { (0..n).map(|i| &h[i] * &q[i] * &f[i]).sum() };
    let mut best: Option<Rational> = None;
    let mut consider = |f: Vec<Rational>| {
        let reached: Rational = (0..n).map(|i| &h[i] * &f[i]).sum();
        if reached >= *lambda {
            let c = cost(&f);
            if best.as_ref().map_or(true, |b| c < *b) {
                best = Some(c);
            }
        }
    };
    for mask in 0u32..(1 << n) {
        let base: Vec<Rational> = (0..n)
            .map(|i| if mask >> i & 1 == 1 { Rational::one() } else { Rational::zero() })
            .collect();
        consider(base.clone());
        for k in 0..n {
            if h[k].is_zero() {
                continue;
            }
            let others: Rational = (0..n).filter(|i| *i != k).map(|i| &h[i] * &base[i]).sum();
            let fk = (lambda - others) / &h[k];
            if !fk.is_negative() && fk <= Rational::one() {
                let mut f = base.clone();
                f[k] = fk;
                consider(f);
            }
        }
    }
    best
}

/// Two-sided Wilson score interval at `z` standard errors.
pub fn wilson(successes: usize, trials: usize, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let denom = 1.0 + z * z / n;
    let centre = (p + z * z / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z * z / (4.0 * n * n)).sqrt() / denom;
    (centre - half, centre + half)
}

/// `min_i TV(p, q_i)` computed directly from the L1 formula.
pub fn opt_direct(p: &FiniteDistribution, q: &[FiniteDistribution]) -> Rational {
    q.iter()
        .map(|qi| {
            qi.probs()
                .iter()
                .zip(p.probs())
                .map(|(a, b)| (a - b).abs())
                .sum::<Rational>()
                / int(2)
        })
        .min()
        .expect("nonempty family")
}
