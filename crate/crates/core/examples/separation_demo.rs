//! Proper versus improper learning on the two-family instance.
//!
//! Usage: `cargo run --release --example separation_demo -- [trials] [seed]`

use std::time::Instant;

use densel::lowerbound::{distinguisher_experiment, separation_demo_instance, Learner};
use densel::rational::ratio;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let trials: usize = args.next().map(|a| a.parse()).transpose()?.unwrap_or(100);
    let seed: u64 = args.next().map(|a| a.parse()).transpose()?.unwrap_or(7);
    let m = 10;
    let instance = separation_demo_instance(m)?;
    println!(
        "beta = 1/2, N = {}, k = {}, domain = {} atoms, m = {m}, trials = {trials}",
        instance.n,
        instance.k,
        instance.domain_size()
    );
    for learner in [
        Learner::Yatracos,
        Learner::A1Fresh {
            epsilon: ratio(1, 10),
            delta: 0.1,
        },
    ] {
        let start = Instant::now();
        let report = distinguisher_experiment(&instance, &learner, m, trials, seed)?;
        println!(
            "{:>9}: error rate {:.3}, mean factor {:.3}, guarantee rate {}, {:.1?}",
            learner.label(),
            report.error_rate,
            report.mean_factor,
            report.guarantee_rate.map_or("-".to_string(), |g| format!("{g:.3}")),
            start.elapsed()
        );
    }
    Ok(())
}
