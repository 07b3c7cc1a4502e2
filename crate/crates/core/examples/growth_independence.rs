// Modelling M future sentences explicitly changes nothing: the optimum puts
// no mass on them and keeps the same value for every growth rate.

use robust_lexrank::graph::transition_from_similarity;
use robust_lexrank::robust::{default_ids, solve_growth};
use robust_lexrank::{build_similarity_matrix, fixtures, solve_robust, GrowthModel, RobustBudget};

pub fn run_example() -> robust_lexrank::Result<()> {
    let corpus = fixtures::news_cluster()?;
    let sim = build_similarity_matrix(&corpus)?;
    let p = transition_from_similarity(&sim, 0.1)?;
    let budget = RobustBudget::uniform(0.5, 0.5, corpus.len())?;
    let base = solve_robust(&p, &budget, &default_ids(corpus.len()))?;
    println!("without growth: objective {:.9}", base.objective);
    for m in [1, 2, 5, 10] {
        let g = solve_growth(&p, &budget, &GrowthModel::uniform(m, 0.5)?)?;
        let mass: f64 = g.x2.iter().sum();
        println!(
            "M = {m:>2}: objective {:.9}, mass on new sentences {mass:.1e}",
            g.objective
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> robust_lexrank::Result<()> {
    run_example()
}
