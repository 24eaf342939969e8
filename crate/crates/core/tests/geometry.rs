mod common;

use common::{knapsack_min, random_distribution, random_family, rng_for};
use densel::distributions::{distance_vector, DistanceVector, FiniteDistribution};
use densel::geometry::{
    lambda_candidates, lambda_objective, minimax_functions, optimal_lambda, qtv_separate_with, support_function_tv,
    tv_best_response, water_fill, QtvSeparator, Separation, SeparationMethod,
};
use densel::rational::{int, ratio, Rational};
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::Rng;

fn check_separation(q: &[FiniteDistribution], y: &DistanceVector, s: &Separation) -> Result<(), TestCaseError> {
    match s {
        Separation::Witness(p) => {
            let v = distance_vector(p, q).unwrap();
            prop_assert!(v.dominated_by(y), "witness distances {:?} not below {:?}", v, y);
        }
        Separation::Separator(plane) => {
            prop_assert!(plane.weights.iter().all(|w| *w >= Rational::zero()));
            prop_assert_eq!(plane.weights.iter().sum::<Rational>(), Rational::one());
            let (support, _) = support_function_tv(q, &plane.weights).unwrap();
            prop_assert_eq!(&support, &plane.support);
            prop_assert!(plane.separates(y));
        }
    }
    Ok(())
}

/// A query point near the boundary: the distance vector of a random `p`,
/// scaled by a factor in [1/2, 3/2].
fn probe<R: Rng>(q: &[FiniteDistribution], rng: &mut R) -> DistanceVector {
    let p = random_distribution(q[0].domain_size(), 6, rng);
    let scale = ratio(rng.gen_range(4..=12), 8);
    let v = distance_vector(&p, q).unwrap();
    DistanceVector::new(v.entries().iter().map(|e| e * &scale).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn cutting_plane_and_farkas_agree(seed in any::<u64>(), n in 1usize..=4, d in 1usize..=5) {
        let mut rng = rng_for(seed, 0);
        let q = random_family(n, d, 6, &mut rng);
        let y = probe(&q, &mut rng);
        let a = qtv_separate_with(&q, &y, SeparationMethod::CuttingPlane).unwrap();
        let b = qtv_separate_with(&q, &y, SeparationMethod::FarkasLp).unwrap();
        prop_assert_eq!(a.is_witness(), b.is_witness());
        check_separation(&q, &y, &a)?;
        check_separation(&q, &y, &b)?;
    }

    #[test]
    fn greedy_best_response_matches_the_lp(seed in any::<u64>(), n in 1usize..=4, d in 1usize..=6) {
        let mut rng = rng_for(seed, 1);
        let q = random_family(n, d, 6, &mut rng);
        let h = random_distribution(n, 5, &mut rng).probs().to_vec();
        let (greedy, p) = tv_best_response(&q, &h).unwrap();
        let (lp_value, _) = support_function_tv(&q, &h).unwrap();
        prop_assert_eq!(&greedy, &lp_value);
        prop_assert_eq!(distance_vector(&p, &q).unwrap().dot(&h), greedy);
    }

    #[test]
    fn water_fill_solves_the_per_atom_knapsack(seed in any::<u64>(), n in 1usize..=5) {
        let mut rng = rng_for(seed, 2);
        let q: Vec<Rational> = (0..n).map(|_| ratio(rng.gen_range(0..=6), 6)).collect();
        let h = random_distribution(n, 5, &mut rng).probs().to_vec();
        let lambda = ratio(rng.gen_range(0..=10), 10);
        let f = water_fill(&q, &h, &lambda);
        prop_assert!(f.iter().all(|v| *v >= Rational::zero() && *v <= Rational::one()));
        let reached: Rational = f.iter().zip(&h).map(|(a, b)| a * b).sum();
        prop_assert!(reached >= lambda);
        let cost: Rational = (0..n).map(|i| &h[i] * &q[i] * &f[i]).sum();
        prop_assert_eq!(Some(cost), knapsack_min(&q, &h, &lambda));
    }

    #[test]
    fn lambda_sweep_attains_the_support_function(seed in any::<u64>(), n in 1usize..=4, d in 1usize..=5) {
        let mut rng = rng_for(seed, 3);
        let q = random_family(n, d, 6, &mut rng);
        let h = random_distribution(n, 5, &mut rng).probs().to_vec();
        let choice = optimal_lambda(&q, &h).unwrap();
        let (support, _) = support_function_tv(&q, &h).unwrap();
        prop_assert_eq!(&choice.value, &support);
        for lambda in lambda_candidates(&q, &h) {
            prop_assert!(lambda_objective(&q, &h, &lambda) <= choice.value);
        }
        // midpoints between breakpoints never beat the breakpoints
        for k in 0..=8 {
            prop_assert!(lambda_objective(&q, &h, &ratio(k, 8)) <= choice.value);
        }
    }

    #[test]
    fn minimax_functions_certify_outside_points(seed in any::<u64>(), n in 2usize..=4, d in 2usize..=5) {
        let mut rng = rng_for(seed, 4);
        let q = random_family(n, d, 6, &mut rng);
        // strictly below every distance vector's minimum weighted sum
        let y = DistanceVector::new(vec![Rational::zero(); n]);
        if tv_best_response(&q, &vec![ratio(1, n as i64); n]).unwrap().0.is_zero() {
            return Ok(());
        }
        let w = minimax_functions(&q, &y).unwrap();
        prop_assert!(w.check(&q, &y).is_ok(), "{:?}", w.check(&q, &y));
        let p = random_distribution(d, 6, &mut rng);
        let z = w.z(&p);
        let tv = distance_vector(&p, &q).unwrap();
        for i in 0..n {
            prop_assert!(z[i] <= tv.entries()[i]);
        }
        let weighted: Rational = z.iter().zip(&w.hyperplane.weights).map(|(a, b)| a * b).sum();
        prop_assert!(weighted >= w.game_value);
    }
}

#[test]
fn separator_pool_is_reused_across_queries() {
    let mut rng = rng_for(7, 0);
    let q = random_family(4, 8, 6, &mut rng);
    let mut separator = QtvSeparator::new(&q).unwrap();
    for _ in 0..20 {
        let y = probe(&q, &mut rng);
        let warm = separator.separate(&y).unwrap();
        let cold = QtvSeparator::new(&q).unwrap().separate(&y).unwrap();
        assert_eq!(warm.is_witness(), cold.is_witness());
    }
    assert!(separator.pool_size() > 0);
}

#[test]
fn candidates_themselves_are_inside() {
    let q = vec![
        FiniteDistribution::parse(&["1/2", "1/2", "0"]).unwrap(),
        FiniteDistribution::parse(&["0", "1/3", "2/3"]).unwrap(),
    ];
    for qi in &q {
        let y = distance_vector(qi, &q).unwrap();
        let s = qtv_separate_with(&q, &y, SeparationMethod::CuttingPlane).unwrap();
        assert!(s.is_witness());
    }
    let below = DistanceVector::new(vec![int(0), int(0)]);
    assert!(!qtv_separate_with(&q, &below, SeparationMethod::CuttingPlane).unwrap().is_witness());
}

#[test]
fn mismatched_dimension_is_an_error() {
    let q = vec![FiniteDistribution::uniform(2), FiniteDistribution::point_mass(2, 0)];
    let y = DistanceVector::new(vec![int(1)]);
    assert!(QtvSeparator::new(&q).unwrap().separate(&y).is_err());
}
