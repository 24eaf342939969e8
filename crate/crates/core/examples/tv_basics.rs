//! Total variation three ways, plus seeded sampling.

use densel::distributions::{empirical, overlap, sample, total_variation, total_variation_f64, tv_subset_oracle};
use densel::distributions::FiniteDistribution;
use densel::rational::format_rational;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p = FiniteDistribution::parse(&["1/2", "1/4", "1/4"])?;
    let q = FiniteDistribution::parse(&["1/3", "1/3", "1/3"])?;

    let tv = total_variation(&p, &q)?;
    println!("TV(p, q)             = {}", format_rational(&tv));
    println!("max over events      = {}", format_rational(&tv_subset_oracle(&p, &q)?));
    println!("1 - overlap          = {}", format_rational(&(densel::rational::int(1) - overlap(&p, &q)?)));
    println!("float TV             = {:.6}", total_variation_f64(&p.to_f64_vec(), &q.to_f64_vec()));

    // same seed, same draws
    let a = sample(&p, 10_000, 42);
    let b = sample(&p, 10_000, 42);
    assert_eq!(a, b);
    let p_hat = empirical(&a, 3)?;
    println!("empirical from 10000 = [{}]", p_hat.literals().join(", "));
    println!("TV(p, p_hat)         = {:.5}", densel::rational::to_f64(&total_variation(&p, &p_hat)?));
    Ok(())
}
