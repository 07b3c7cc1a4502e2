// Robust LexRank for growing budgets: as the budget grows the ranks flatten
// towards uniform, and the optimal value is the worst-case residual bound.

use robust_lexrank::graph::transition_from_similarity;
use robust_lexrank::robust::robust_objective;
use robust_lexrank::{build_similarity_matrix, fixtures, solve_robust, RobustBudget};

pub fn run_example() -> robust_lexrank::Result<()> {
    let corpus = fixtures::news_cluster()?;
    let ids = corpus.ids();
    let sim = build_similarity_matrix(&corpus)?;
    let p = transition_from_similarity(&sim, 0.1)?;

    let mut columns = Vec::new();
    for eps in [0.01, 0.5, 5.0, 10.0] {
        let budget = RobustBudget::uniform(eps, eps, ids.len())?;
        let res = solve_robust(&p, &budget, &ids)?;
        let check = robust_objective(&p, &budget, res.x1.values())?;
        println!(
            "eps {eps:>5}: objective {:.6} (recomputed {check:.6})",
            res.objective
        );
        columns.push(res.reported.normalized());
    }
    println!(
        "{:<5} {:>8} {:>8} {:>8} {:>8}",
        "id", "0.01", "0.5", "5", "10"
    );
    for (i, id) in ids.iter().enumerate() {
        print!("{id:<5}");
        for c in &columns {
            print!(" {:>8.4}", c[i]);
        }
        println!();
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> robust_lexrank::Result<()> {
    run_example()
}
