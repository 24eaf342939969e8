//! Membership and separation for the dominating set of distance vectors.

use densel::distributions::{distance_vector, DistanceVector, FiniteDistribution};
use densel::geometry::{qtv_separate_with, Separation, SeparationMethod};
use densel::rational::{format_rational, ratio};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let q = vec![
        FiniteDistribution::parse(&["1/2", "1/2", "0"])?,
        FiniteDistribution::parse(&["0", "1/2", "1/2"])?,
        FiniteDistribution::parse(&["1/3", "1/3", "1/3"])?,
    ];
    let queries = [
        vec![ratio(1, 2), ratio(1, 2), ratio(1, 3)],
        vec![ratio(1, 4), ratio(1, 4), ratio(1, 6)],
        vec![ratio(1, 10), ratio(1, 10), ratio(1, 10)],
    ];
    for y in queries {
        let y = DistanceVector::new(y);
        let label = y.entries().iter().map(format_rational).collect::<Vec<_>>().join(", ");
        for method in [SeparationMethod::CuttingPlane, SeparationMethod::FarkasLp] {
            match qtv_separate_with(&q, &y, method)? {
                Separation::Witness(p) => {
                    let v = distance_vector(&p, &q)?;
                    println!(
                        "y = ({label}) {method:?}: inside, p = [{}], v(p) = [{}]",
                        p.literals().join(", "),
                        v.entries().iter().map(format_rational).collect::<Vec<_>>().join(", ")
                    );
                }
                Separation::Separator(plane) => println!(
                    "y = ({label}) {method:?}: outside, h = [{}], h.y = {} < support {}",
                    plane.weights.iter().map(format_rational).collect::<Vec<_>>().join(", "),
                    format_rational(&y.dot(&plane.weights)),
                    format_rational(&plane.support)
                ),
            }
        }
    }
    Ok(())
}
