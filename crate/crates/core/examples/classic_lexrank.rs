// Classic LexRank: dominant eigenvector of the transition matrix by power
// iteration, reported with the largest score scaled to one.

use robust_lexrank::graph::transition_from_similarity;
use robust_lexrank::ranking::{eigen_residual, DEFAULT_MAX_ITER, DEFAULT_TOL};
use robust_lexrank::{build_similarity_matrix, fixtures, power_iteration, ReportedRanks};

pub fn run_example() -> robust_lexrank::Result<()> {
    let corpus = fixtures::news_cluster()?;
    let sim = build_similarity_matrix(&corpus)?;
    for threshold in [0.1, 0.2, 0.3] {
        let p = transition_from_similarity(&sim, threshold)?;
        let x = power_iteration(&p, DEFAULT_TOL, DEFAULT_MAX_ITER)?;
        let ranks = ReportedRanks::new(&corpus.ids(), x.values())?;
        println!(
            "threshold {threshold} (residual {:.1e})",
            eigen_residual(&p, x.values())
        );
        for e in ranks.entries() {
            println!("  {:<5} {:.4}", e.id, e.normalized);
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> robust_lexrank::Result<()> {
    run_example()
}
