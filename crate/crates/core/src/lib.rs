//! Density selection over a finite candidate family under total variation.
//!
//! Given candidates `q_1..q_n` on a finite domain and access to an unknown
//! target `p` (samples or statistical queries), the learners in
//! [`selectors`] return a distribution within `2 * min_i TV(q_i, p) + eps`
//! of `p`, or a member of the family within the classical factor 3. All
//! geometry is carried out in exact rational arithmetic.
//!
//! Layout:
//!
//! * [`distributions`]: distributions, value tables, sampling, TV.
//! * [`lp`]: exact simplex with optimality, infeasibility and ray certificates.
//! * [`geometry`]: the dominating set of distance vectors, separation and the
//!   minimax query functions.
//! * [`yatracos`]: Yatracos sets and the finite threshold class used by the
//!   static learner.
//! * [`oracle`]: statistical-query backends with budgets.
//! * [`selectors`]: the learners.
//! * [`lowerbound`]: the two-family construction separating proper and
//!   improper learning.
//! * [`harness`]: instance files, reports, verification suites, benches.

pub mod distributions;
pub mod geometry;
pub mod harness;
pub mod lowerbound;
pub mod lp;
pub mod oracle;
pub mod rational;
pub mod selectors;
pub mod yatracos;

pub use distributions::{
    distance_vector, empirical, expectation, mix, sample, total_variation, DistanceVector, DistributionError,
    FiniteDistribution, SampleBatch, ValueTable,
};
pub use rational::{format_rational, parse_rational, Rational};
