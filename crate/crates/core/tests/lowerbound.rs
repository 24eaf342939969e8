mod common;

use common::rng_for;
use densel::distributions::{mix, total_variation, FiniteDistribution};
use densel::lowerbound::{
    build_instance, chain_rule_bound, collision_bound, distinguisher_experiment, exact_mixture_tv, exact_tvs,
    lecam_mistake_bound, member, mixture_sequence_law, no_collision_event, other_base_tv, own_base_tv,
    sample_member, smallest_valid_n, spike_sets, wrong_base_factor, Learner,
};
use densel::rational::{int, ratio, Rational};
use num_traits::{One, Zero};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn members_sit_at_the_stated_distances(seed in any::<u64>(), family in 1u8..=2, den in 2i64..=12) {
        let beta = ratio(1, den);
        let n = smallest_valid_n(&beta, 20).unwrap();
        let instance = build_instance(&beta, n).unwrap();
        let m = sample_member(&instance, family, &mut rng_for(seed, 0)).unwrap();
        let (tv1, tv2) = exact_tvs(&instance, &m).unwrap();
        let (own, other) = if family == 1 { (tv1, tv2) } else { (tv2, tv1) };
        prop_assert_eq!(own, own_base_tv(&beta));
        prop_assert_eq!(other, other_base_tv(&beta));
        prop_assert_eq!(m.p.probs().iter().sum::<Rational>(), Rational::one());
    }
}

#[test]
fn factor_approaches_three_as_beta_shrinks() {
    let mut last = Rational::zero();
    for den in [2, 4, 10, 50, 1000] {
        let f = wrong_base_factor(&ratio(1, den));
        assert!(f > last && f < int(3));
        assert_eq!(f, other_base_tv(&ratio(1, den)) / own_base_tv(&ratio(1, den)));
        last = f;
    }
    assert_eq!(wrong_base_factor(&ratio(1, 2)), ratio(5, 3));
}

#[test]
fn family_average_is_uniform() {
    let beta = ratio(1, 2);
    let instance = build_instance(&beta, 6).unwrap();
    let d = instance.domain_size();
    for family in [1u8, 2] {
        let members: Vec<FiniteDistribution> = spike_sets(instance.n, instance.k)
            .iter()
            .map(|s| member(&instance, family, s).unwrap().p)
            .collect();
        let w = vec![ratio(1, members.len() as i64); members.len()];
        assert_eq!(mix(&w, &members).unwrap(), FiniteDistribution::uniform(d));
    }
}

#[test]
fn mixture_tv_grows_with_samples_from_zero() {
    let instance = build_instance(&ratio(1, 2), 3).unwrap();
    let mut last = Rational::zero();
    for m in 1..=3 {
        let tv = exact_mixture_tv(&instance, m).unwrap();
        assert!(tv >= last, "m = {m}");
        let floor = lecam_mistake_bound(&tv);
        assert_eq!(floor, (int(1) - &tv) / int(2));
        last = tv;
    }
    assert!(exact_mixture_tv(&instance, 1).unwrap().is_zero());
}

#[test]
fn chain_rule_bounds_the_sequence_tv() {
    let instance = build_instance(&ratio(1, 2), 3).unwrap();
    for m in 1..=3 {
        let a = FiniteDistribution::new(mixture_sequence_law(&instance, 1, m).unwrap()).unwrap();
        let b = FiniteDistribution::new(mixture_sequence_law(&instance, 2, m).unwrap()).unwrap();
        let event = no_collision_event(&instance, m);
        let bound = chain_rule_bound(&a, &b, &event).unwrap();
        assert!(total_variation(&a, &b).unwrap() <= bound, "m = {m}");
    }
}

#[test]
fn collision_product_matches_its_definition() {
    assert_eq!(collision_bound(1, 10).unwrap(), int(1));
    assert_eq!(collision_bound(3, 10).unwrap(), ratio(8, 10) * ratio(6, 10));
    assert!(collision_bound(10, 4).is_err());
}

#[test]
fn invalid_parameters_are_rejected() {
    assert!(build_instance(&ratio(1, 2), 10).is_err(), "k = 10/3 is not an integer");
    assert!(build_instance(&ratio(0, 1), 6).is_err());
    assert!(build_instance(&ratio(3, 2), 6).is_err());
    assert_eq!(smallest_valid_n(&ratio(1, 2), 10000).unwrap(), 10002);
}

#[test]
fn experiments_are_reproducible() {
    let instance = build_instance(&ratio(1, 2), 30).unwrap();
    for learner in [Learner::Yatracos, Learner::Exact { epsilon: ratio(1, 10) }] {
        let a = distinguisher_experiment(&instance, &learner, 3, 12, 77).unwrap();
        let b = distinguisher_experiment(&instance, &learner, 3, 12, 77).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.records.len(), 12);
        assert!(a.records.iter().all(|r| r.family == 1 || r.family == 2));
    }
    let empty = distinguisher_experiment(&instance, &Learner::Yatracos, 3, 0, 1).unwrap();
    assert!(empty.records.is_empty());
}
