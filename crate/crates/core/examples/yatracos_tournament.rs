//! The proper minimum-distance baseline on a lower-bound member, next to the
//! improper learner with exact expectations.

use densel::distributions::{sample, total_variation};
use densel::lowerbound::{build_instance, exact_tvs, member};
use densel::rational::{format_rational, ratio};
use densel::selectors::{improper_select_exact, YatracosTournament};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let instance = build_instance(&ratio(1, 2), 30)?;
    let spikes: Vec<usize> = (0..instance.k).map(|j| 3 * j).collect();
    let target = member(&instance, 1, &spikes)?;
    let (tv1, tv2) = exact_tvs(&instance, &target)?;
    println!("member of family 1: TV to q1 {}, to q2 {}", format_rational(&tv1), format_rational(&tv2));

    let candidates = instance.candidates();
    let tournament = YatracosTournament::new(&candidates)?;
    for m in [5, 50, 500] {
        let batch = sample(&target.p, m, m as u64);
        let r = tournament.select(&batch)?;
        println!(
            "m = {m:>3}: scores [{}] -> q{}",
            r.certificate_y.entries().iter().map(format_rational).collect::<Vec<_>>().join(", "),
            r.proper_index.expect("proper") + 1
        );
    }
    let eps = ratio(1, 20);
    let r = improper_select_exact(&candidates, &target.p, &eps)?;
    println!("improper output is at TV {}", format_rational(&total_variation(&r.output, &target.p)?));
    Ok(())
}
