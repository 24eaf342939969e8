//! The non-adaptive learner over the threshold class built from Yatracos sets.

use densel::distributions::{sample, total_variation, FiniteDistribution};
use densel::rational::{format_rational, ratio, to_f64};
use densel::selectors::static_select;
use densel::yatracos::{shatter_check, uniform_convergence_budget, ThresholdClass};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let q = vec![
        FiniteDistribution::parse(&["1/2", "1/4", "1/8", "1/8", "0", "0"])?,
        FiniteDistribution::parse(&["0", "1/8", "1/8", "1/4", "1/2", "0"])?,
        FiniteDistribution::parse(&["1/6", "1/6", "1/6", "1/6", "1/6", "1/6"])?,
    ];
    let p = FiniteDistribution::parse(&["1/4", "1/4", "1/4", "0", "1/8", "1/8"])?;
    let class = ThresholdClass::new(&q)?;
    for (i, qi) in q.iter().enumerate() {
        println!(
            "d_F(p, q{}) = {} <= TV = {}",
            i + 1,
            format_rational(&class.distance(&p, qi)?),
            format_rational(&total_variation(&p, qi)?)
        );
    }
    println!("largest shattered set: {} points (bound {})", shatter_check(&q, 6)?, 10 * q.len());

    let eps = ratio(1, 4);
    let m = uniform_convergence_budget(q.len(), to_f64(&eps), 0.1);
    let batch = sample(&p, m, 3);
    let r = static_select(&q, &batch, &eps, 0.1)?;
    println!(
        "{m} samples -> output [{}], TV to p {}",
        r.output.literals().join(", "),
        format_rational(&total_variation(&r.output, &p)?)
    );
    Ok(())
}
