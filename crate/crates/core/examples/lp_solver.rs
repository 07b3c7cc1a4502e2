// The dense simplex solver on its own: a small production-planning LP, an
// infeasible one and an unbounded one.

use robust_lexrank::{LinearProgram, Relation};

pub fn run_example() -> robust_lexrank::Result<()> {
    // maximize 3a + 5b  s.t.  a <= 4, 2b <= 12, 3a + 2b <= 18
    let mut lp = LinearProgram::new(vec![-3.0, -5.0]);
    lp.set_name(0, "a").set_name(1, "b");
    lp.add_constraint(vec![1.0, 0.0], Relation::Le, 4.0)?
        .add_constraint(vec![0.0, 2.0], Relation::Le, 12.0)?
        .add_constraint(vec![3.0, 2.0], Relation::Le, 18.0)?;
    print!("{}", lp.to_lp_text());
    let sol = lp.solve()?.into_optimal()?;
    println!(
        "optimum {:.3} at a = {:.3}, b = {:.3}\n",
        -sol.objective_value, sol.x[0], sol.x[1]
    );

    let mut infeasible = LinearProgram::new(vec![1.0]);
    infeasible.add_constraint(vec![1.0], Relation::Ge, 2.0)?;
    infeasible.set_bounds(0, 0.0, 1.0);
    println!("x in [0, 1], x >= 2: {}", infeasible.solve()?.status);

    let mut unbounded = LinearProgram::new(vec![-1.0]);
    unbounded.add_constraint(vec![1.0], Relation::Ge, 1.0)?;
    println!("max x, x >= 1: {}", unbounded.solve()?.status);
    Ok(())
}

#[allow(dead_code)]
fn main() -> robust_lexrank::Result<()> {
    run_example()
}
