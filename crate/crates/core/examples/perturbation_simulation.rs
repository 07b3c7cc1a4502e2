// Samples perturbed, grown transition matrices and compares the observed
// residuals with the worst-case bound, at the robust optimum and at uniform.

use robust_lexrank::graph::transition_from_similarity;
use robust_lexrank::simulator::{empirical_phi1, prop2_check, BlockBudget, SimulationBudgets};
use robust_lexrank::{build_similarity_matrix, fixtures, solve_robust};

pub fn run_example() -> robust_lexrank::Result<()> {
    let corpus = fixtures::news_cluster()?;
    let ids = corpus.ids();
    let n = ids.len();
    let m = 3;
    let sim = build_similarity_matrix(&corpus)?;
    let p = transition_from_similarity(&sim, 0.1)?;
    let budgets = SimulationBudgets::uniform(n, 1.0, 0.5, 1.0, 0.5, m, 0.4)?;

    let robust = solve_robust(&p, &budgets.robust_budget(), &ids)?;
    let mut at_robust = robust.x1.values().to_vec();
    at_robust.resize(n + m, 0.0);
    let uniform = vec![1.0 / (n + m) as f64; n + m];
    for (name, x) in [("robust", &at_robust), ("uniform", &uniform)] {
        let r = empirical_phi1(&p, x, &budgets, 2000, 42)?;
        println!(
            "{name:<8} max residual {:.4} <= bound {:.4}, violations {}",
            r.max_residual, r.bound_value, r.violations
        );
    }

    let fixed = prop2_check(
        &p,
        robust.x1.values(),
        &BlockBudget::uniform(1.0, 0.5, n)?,
        2000,
        42,
    )?;
    println!(
        "fixed size: max {:.4} <= bound {:.4}; grown-set max with psi allowed {:.4}",
        fixed.max_fixed_residual, fixed.bound_value, fixed.grown_max
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> robust_lexrank::Result<()> {
    run_example()
}
