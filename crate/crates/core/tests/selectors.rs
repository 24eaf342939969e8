mod common;

use common::{opt_direct, random_distribution, random_family, rng_for};
use densel::distributions::{distance_vector, sample, total_variation};
use densel::oracle::{QueryBudget, StatOracle};
use densel::rational::{ratio, Rational};
use densel::selectors::{
    accuracy_a1, guarantee_holds, improper_select_a1, improper_select_a2, improper_select_exact,
    improper_select_exact_with, iteration_bound, required_budget_a1, required_budget_a2, static_select,
    yatracos_proper, IndexRule, SelectorError,
};
use densel::yatracos::uniform_convergence_budget;
use proptest::prelude::*;

fn epsilon(k: u8) -> Rational {
    [ratio(1, 3), ratio(1, 4), ratio(1, 5)][k as usize % 3].clone()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn exact_learner_meets_the_factor_two_guarantee(seed in any::<u64>(), n in 1usize..=3, d in 1usize..=5, k in any::<u8>()) {
        let mut rng = rng_for(seed, 0);
        let q = random_family(n, d, 6, &mut rng);
        let p = random_distribution(d, 6, &mut rng);
        let eps = epsilon(k);
        let r = improper_select_exact(&q, &p, &eps).unwrap();
        let opt = opt_direct(&p, &q);
        prop_assert!(guarantee_holds(&total_variation(&r.output, &p).unwrap(), &opt, &eps));
        prop_assert!(r.iterations <= iteration_bound(n, &eps));
        prop_assert!(r.certificate_holds(&q, &eps).unwrap());
        // exact progress never lifts y above the true distances
        prop_assert!(r.certificate_y.dominated_by(&distance_vector(&p, &q).unwrap()));
        let path = r.trajectory(n, &eps);
        prop_assert_eq!(path.last().unwrap(), &r.certificate_y);
    }

    #[test]
    fn a1_with_exact_answers_replays_the_exact_learner(seed in any::<u64>(), n in 1usize..=3, d in 1usize..=5, k in any::<u8>()) {
        let mut rng = rng_for(seed, 1);
        let q = random_family(n, d, 6, &mut rng);
        let p = random_distribution(d, 6, &mut rng);
        let eps = epsilon(k);
        let reference = improper_select_exact_with(&q, &p, &eps, IndexRule::FirstQualifying).unwrap();
        let budget = QueryBudget::new(required_budget_a1(n, &eps), 0.01, 0.1).unwrap();
        let mut oracle = StatOracle::exact(p.clone(), budget);
        let r = improper_select_a1(&q, &mut oracle, &eps).unwrap();
        prop_assert_eq!(&r.output, &reference.output);
        prop_assert_eq!(&r.chosen, &reference.chosen);
        prop_assert_eq!(r.queries_used, r.ledger.len());
        prop_assert_eq!(r.queries_used, n * (r.iterations - 1));
    }

    #[test]
    fn a2_with_exact_answers_stays_within_budget(seed in any::<u64>(), n in 2usize..=4, d in 1usize..=5, k in any::<u8>()) {
        let mut rng = rng_for(seed, 2);
        let q = random_family(n, d, 6, &mut rng);
        let p = random_distribution(d, 6, &mut rng);
        let eps = epsilon(k);
        let budget = QueryBudget::new(required_budget_a2(n, &eps), 0.01, 0.1).unwrap();
        let mut oracle = StatOracle::exact(p.clone(), budget);
        let r = improper_select_a2(&q, &mut oracle, &eps).unwrap();
        prop_assert!(r.queries_used <= required_budget_a2(n, &eps));
        prop_assert!(guarantee_holds(&total_variation(&r.output, &p).unwrap(), &opt_direct(&p, &q), &eps));
        prop_assert!(r.certificate_holds(&q, &eps).unwrap());
    }

    #[test]
    fn proper_learner_returns_a_candidate(seed in any::<u64>(), n in 1usize..=4, d in 1usize..=6, m in 1usize..=40) {
        let mut rng = rng_for(seed, 3);
        let q = random_family(n, d, 6, &mut rng);
        let p = random_distribution(d, 6, &mut rng);
        let r = yatracos_proper(&q, &sample(&p, m, seed)).unwrap();
        let i = r.proper_index.unwrap();
        prop_assert_eq!(&r.output, &q[i]);
        prop_assert_eq!(r.certificate_y.len(), n);
    }
}

#[test]
fn static_learner_needs_its_sample_budget() {
    let mut rng = rng_for(11, 0);
    let q = random_family(2, 4, 6, &mut rng);
    let p = random_distribution(4, 6, &mut rng);
    let eps = ratio(1, 4);
    let needed = uniform_convergence_budget(2, 0.25, 0.1);
    let short = sample(&p, needed - 1, 1);
    assert!(matches!(
        static_select(&q, &short, &eps, 0.1),
        Err(SelectorError::InsufficientSamples { .. })
    ));
    let r = static_select(&q, &sample(&p, needed, 1), &eps, 0.1).unwrap();
    assert!(guarantee_holds(&total_variation(&r.output, &p).unwrap(), &opt_direct(&p, &q), &eps));
}

#[test]
fn epsilon_outside_the_unit_interval_is_rejected() {
    let q = vec![random_distribution(3, 4, &mut rng_for(0, 0))];
    for eps in [ratio(0, 1), ratio(1, 1), ratio(-1, 2)] {
        assert!(matches!(
            improper_select_exact(&q, &q[0], &eps),
            Err(SelectorError::InvalidEpsilon(_))
        ));
    }
}

#[test]
fn a1_reports_an_exhausted_budget() {
    let mut rng = rng_for(12, 0);
    let q = random_family(3, 5, 6, &mut rng);
    let p = random_distribution(5, 6, &mut rng);
    let eps = ratio(1, 5);
    let first = improper_select_exact_with(&q, &p, &eps, IndexRule::FirstQualifying).unwrap();
    if first.chosen.is_empty() {
        return;
    }
    let mut oracle = StatOracle::exact(p, QueryBudget::new(1, 0.05, 0.1).unwrap());
    assert!(matches!(
        improper_select_a1(&q, &mut oracle, &eps),
        Err(SelectorError::Oracle(_))
    ));
}

#[test]
fn a1_accuracy_is_a_quarter_epsilon() {
    assert_eq!(accuracy_a1(&ratio(1, 10)), ratio(1, 40));
    assert_eq!(required_budget_a1(3, &ratio(1, 10)), 180);
    assert_eq!(iteration_bound(3, &ratio(1, 7)), 42);
}
