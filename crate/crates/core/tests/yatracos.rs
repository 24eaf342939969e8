mod common;

use common::{random_distribution, random_family, rng_for};
use densel::distributions::total_variation;
use densel::geometry::support_equivalence_check;
use densel::rational::Rational;
use densel::yatracos::{d_f, shatter_check, yatracos_sets, ThresholdClass};
use num_traits::Zero;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(80))]

    #[test]
    fn threshold_distance_never_exceeds_tv(seed in any::<u64>(), n in 2usize..=4, d in 1usize..=6) {
        let mut rng = rng_for(seed, 0);
        let q = random_family(n, d, 6, &mut rng);
        let class = ThresholdClass::new(&q).unwrap();
        let p = random_distribution(d, 6, &mut rng);
        for qi in &q {
            let df = class.distance(&p, qi).unwrap();
            prop_assert!(df >= Rational::zero());
            prop_assert!(df <= total_variation(&p, qi).unwrap());
            prop_assert_eq!(&df, &d_f(&p, qi, &q).unwrap());
        }
    }

    #[test]
    fn support_functions_agree(seed in any::<u64>(), n in 1usize..=4, d in 1usize..=5) {
        let mut rng = rng_for(seed, 1);
        let q = random_family(n, d, 6, &mut rng);
        let h = random_distribution(n, 5, &mut rng).probs().to_vec();
        prop_assert!(support_equivalence_check(&q, &h).unwrap());
    }

    #[test]
    fn yatracos_sets_are_where_one_candidate_dominates_another(seed in any::<u64>(), n in 2usize..=4, d in 1usize..=6) {
        let mut rng = rng_for(seed, 2);
        let q = random_family(n, d, 6, &mut rng);
        let m = yatracos_sets(&q).unwrap();
        for i in 0..n {
            for j in 0..n {
                for x in 0..d {
                    prop_assert_eq!(m.contains(i, j, x), q[i].prob(x) >= q[j].prob(x));
                }
                // the set attains TV between the pair
                let event = m.set(i, j);
                let gap = q[i].mass_of(event) - q[j].mass_of(event);
                prop_assert_eq!(gap, total_variation(&q[i], &q[j]).unwrap());
            }
        }
    }
}

#[test]
fn shattered_sets_stay_below_ten_n() {
    let mut rng = rng_for(3, 0);
    for n in 2..=4 {
        let q = random_family(n, 10, 6, &mut rng);
        let shattered = shatter_check(&q, 10).unwrap();
        assert!(shattered <= 10 * n, "n = {n}: {shattered}");
    }
}
