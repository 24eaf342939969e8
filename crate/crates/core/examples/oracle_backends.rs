//! Statistical-query backends answering the same adaptive sequence.

use densel::distributions::{sample, FiniteDistribution, ValueTable};
use densel::oracle::{fresh_sample_size, mechanism_sample_size, MechanismFlavor, QueryBudget, StatOracle};
use densel::rational::{format_rational, ratio};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p = FiniteDistribution::parse(&["1/10", "2/10", "3/10", "4/10"])?;
    let budget = QueryBudget::new(20, 0.05, 0.1)?;
    println!("fresh block size {}", fresh_sample_size(&budget));
    println!(
        "Gaussian mechanism sample size {} (infinite flavor)",
        mechanism_sample_size(&budget, 4, MechanismFlavor::Infinite)
    );
    let shared = sample(&p, 2000, 5);
    let mut oracles = vec![
        ("exact", StatOracle::exact(p.clone(), budget)),
        ("fresh", StatOracle::fresh(&p, budget, fresh_sample_size(&budget), 6)),
        ("reuse", StatOracle::reuse(&shared, 4, budget)?),
        ("gauss", StatOracle::gaussian(&shared, 4, budget, 0.01, 7)?),
    ];
    let queries = [
        ValueTable::indicator(&[true, false, false, true]),
        ValueTable::new(vec![ratio(0, 1), ratio(1, 3), ratio(2, 3), ratio(1, 1)])?,
    ];
    for (name, oracle) in oracles.iter_mut() {
        let answers: Vec<String> = queries
            .iter()
            .map(|f| oracle.answer(f).map(|a| format_rational(&a)))
            .collect::<Result<_, _>>()?;
        println!("{name:>5}: [{}], {} samples", answers.join(", "), oracle.samples_drawn());
    }
    Ok(())
}
