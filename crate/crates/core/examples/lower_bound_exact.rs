//! Exact quantities of the two-family construction on an enumerable case.

use densel::distributions::FiniteDistribution;
use densel::lowerbound::{
    build_instance, chain_rule_bound, collision_bound, exact_mixture_tv, lecam_mistake_bound, mixture_sequence_law,
    no_collision_event, other_base_tv, own_base_tv, wrong_base_factor,
};
use densel::rational::{format_rational, ratio, to_f64};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for beta in [ratio(1, 2), ratio(1, 10), ratio(1, 50)] {
        let f = wrong_base_factor(&beta);
        println!(
            "beta {:>4}: own-base TV {}, other-base TV {}, factor {} ~ {:.4}",
            format_rational(&beta),
            format_rational(&own_base_tv(&beta)),
            format_rational(&other_base_tv(&beta)),
            format_rational(&f),
            to_f64(&f)
        );
    }
    let instance = build_instance(&ratio(1, 2), 3)?;
    for m in 1..=3 {
        let tv = exact_mixture_tv(&instance, m)?;
        println!(
            "m = {m}: mixture TV {}, Le Cam floor {}",
            format_rational(&tv),
            format_rational(&lecam_mistake_bound(&tv))
        );
    }
    let law1 = FiniteDistribution::new(mixture_sequence_law(&instance, 1, 2)?)?;
    let law2 = FiniteDistribution::new(mixture_sequence_law(&instance, 2, 2)?)?;
    let bound = chain_rule_bound(&law1, &law2, &no_collision_event(&instance, 2))?;
    println!("chain-rule bound with the no-collision event: {}", format_rational(&bound));
    println!("collision product for m = 10, N = 10002: {:.4}", to_f64(&collision_bound(10, 10002)?));
    Ok(())
}
