//! The exact simplex on three small programs, one per outcome, with each
//! certificate checked.

use densel::lp::{self, LinearProgram, LpOutcome, Relation, Sense};
use densel::rational::{format_rational, int, Rational};

fn show(name: &str, program: &LinearProgram<Rational>) -> Result<(), lp::LpError> {
    let outcome = lp::solve(program)?;
    let fmt = |v: &[Rational]| v.iter().map(format_rational).collect::<Vec<_>>().join(", ");
    match &outcome {
        LpOutcome::Optimal { x, value, duals } => println!(
            "{name}: optimal value {} at x = [{}], duals [{}]",
            format_rational(value),
            fmt(x),
            fmt(duals)
        ),
        LpOutcome::Infeasible { farkas } => println!("{name}: infeasible, Farkas multipliers [{}]", fmt(farkas)),
        LpOutcome::Unbounded { x, ray } => println!("{name}: unbounded from [{}] along [{}]", fmt(x), fmt(ray)),
    }
    println!("  certificate verifies: {}", lp::verify(program, &outcome));
    // the same program in floating point reaches the same status
    let float = lp::solve(&program.convert::<f64>())?;
    println!("  float status: {:?}", float.status());
    Ok(())
}

fn main() -> Result<(), lp::LpError> {
    // max 3x + 2y, x + y <= 4, x + 3y <= 6, x <= 3
    let mut a = LinearProgram::new(Sense::Maximize, vec![int(3), int(2)]);
    a.constrain(vec![int(1), int(1)], Relation::Le, int(4));
    a.constrain(vec![int(1), int(3)], Relation::Le, int(6));
    a.set_bounds(0, Some(int(0)), Some(int(3)));
    show("bounded", &a)?;

    // x + y <= 1 and x + y >= 3
    let mut b = LinearProgram::new(Sense::Minimize, vec![int(1), int(1)]);
    b.constrain(vec![int(1), int(1)], Relation::Le, int(1));
    b.constrain(vec![int(1), int(1)], Relation::Ge, int(3));
    show("contradictory", &b)?;

    // max x - y with x - 2y <= 2 and y free
    let mut c = LinearProgram::new(Sense::Maximize, vec![int(1), int(-1)]);
    c.constrain(vec![int(1), int(-2)], Relation::Le, int(2));
    c.set_free(1);
    show("open", &c)
}
