//! From a separating normal to the water-filled query functions.

use densel::distributions::{DistanceVector, FiniteDistribution};
use densel::geometry::{lambda_objective, minimax_functions, optimal_lambda, water_fill};
use densel::rational::{format_rational, ratio};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let q = vec![
        FiniteDistribution::parse(&["3/5", "1/5", "1/5"])?,
        FiniteDistribution::parse(&["1/5", "3/5", "1/5"])?,
    ];
    // one atom, greedy fill in ascending q order
    let f = water_fill(&[ratio(1, 5), ratio(3, 5)], &[ratio(1, 2), ratio(1, 2)], &ratio(3, 4));
    println!("water_fill on one atom: [{}]", f.iter().map(format_rational).collect::<Vec<_>>().join(", "));

    let y = DistanceVector::new(vec![ratio(1, 10), ratio(1, 10)]);
    let w = minimax_functions(&q, &y)?;
    let h = &w.hyperplane.weights;
    println!("normal h = [{}], support {}", h.iter().map(format_rational).collect::<Vec<_>>().join(", "), format_rational(&w.hyperplane.support));
    let choice = optimal_lambda(&q, h)?;
    println!("optimal lambda {} with value {}", format_rational(&choice.lambda), format_rational(&choice.value));
    for lambda in [ratio(0, 1), ratio(1, 4), ratio(1, 2), ratio(1, 1)] {
        println!("  objective at lambda {}: {}", format_rational(&lambda), format_rational(&lambda_objective(&q, h, &lambda)));
    }
    for (i, table) in w.functions.iter().enumerate() {
        println!(
            "F_{} = [{}], E_q{}[F] = {}",
            i + 1,
            table.values().iter().map(format_rational).collect::<Vec<_>>().join(", "),
            i + 1,
            format_rational(&w.baseline[i])
        );
    }
    w.check(&q, &y)?;
    println!("invariants hold at every vertex of the simplex");
    Ok(())
}
