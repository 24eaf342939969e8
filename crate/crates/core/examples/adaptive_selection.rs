//! The adaptive learners A1 and A2 with a fresh-sample oracle, against the
//! exact-expectation reference.

use densel::distributions::{distance_vector, total_variation, FiniteDistribution};
use densel::oracle::{fresh_sample_size, QueryBudget, StatOracle};
use densel::rational::{format_rational, ratio, to_f64};
use densel::selectors::{
    accuracy_a1, accuracy_a2, improper_select_a1, improper_select_a2, improper_select_exact, required_budget_a1,
    required_budget_a2, SelectionResult,
};

fn report(name: &str, r: &SelectionResult, p: &FiniteDistribution, opt: f64) {
    let tv = to_f64(&total_variation(&r.output, p).expect("same domain"));
    println!(
        "{name:>5}: TV {tv:.4} (opt {opt:.4}, bound {:.4}), {} passes, {} queries, output [{}]",
        2.0 * opt + 0.1,
        r.iterations,
        r.queries_used,
        r.output.literals().join(", ")
    );
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let q = vec![
        FiniteDistribution::parse(&["1/2", "1/2", "0", "0"])?,
        FiniteDistribution::parse(&["0", "1/2", "1/2", "0"])?,
        FiniteDistribution::parse(&["0", "0", "1/2", "1/2"])?,
    ];
    let p = FiniteDistribution::parse(&["1/4", "1/4", "1/4", "1/4"])?;
    let eps = ratio(1, 10);
    let v = distance_vector(&p, &q)?;
    let opt = v.entries().iter().map(to_f64).fold(f64::INFINITY, f64::min);
    println!("v(p) = [{}]", v.entries().iter().map(format_rational).collect::<Vec<_>>().join(", "));

    report("exact", &improper_select_exact(&q, &p, &eps)?, &p, opt);

    let budget = QueryBudget::new(required_budget_a1(3, &eps), to_f64(&accuracy_a1(&eps)), 0.1)?;
    let mut oracle = StatOracle::fresh(&p, budget, fresh_sample_size(&budget), 11);
    report("A1", &improper_select_a1(&q, &mut oracle, &eps)?, &p, opt);
    println!("       A1 drew {} samples", oracle.samples_drawn());

    let budget = QueryBudget::new(required_budget_a2(3, &eps), to_f64(&accuracy_a2(3, &eps)), 0.1)?;
    let mut oracle = StatOracle::fresh(&p, budget, fresh_sample_size(&budget), 12);
    let r = improper_select_a2(&q, &mut oracle, &eps)?;
    report("A2", &r, &p, opt);
    for record in r.ledger.iter().take(4) {
        println!("       pass {} queried {:?} -> {}", record.iteration, record.indices, format_rational(&record.answer));
    }
    Ok(())
}
