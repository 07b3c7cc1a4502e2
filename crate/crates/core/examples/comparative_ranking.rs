// Scores ten generated sentences about LexRank against the verified news
// cluster: verified scores are pinned at one, generated ones land in [0, 1].
// At higher thresholds the templates form their own component and score 0.

use robust_lexrank::graph::transition_from_similarity;
use robust_lexrank::{build_similarity_matrix, comparative_rank, fixtures, RobustBudget};

pub fn run_example() -> robust_lexrank::Result<()> {
    let corpus = fixtures::news_cluster_with_templates()?;
    let ids = corpus.ids();
    let sim = build_similarity_matrix(&corpus)?;
    let p = transition_from_similarity(&sim, 0.05)?;
    let budget = RobustBudget::uniform(0.5, 0.5, ids.len())?;
    let res = comparative_rank(&p, corpus.n_verified(), &budget, &ids)?;

    println!("objective {:.6}", res.objective);
    for (k, s) in corpus.sentences().iter().enumerate() {
        let kind = if k < corpus.n_verified() {
            "verified"
        } else {
            "generated"
        };
        println!(
            "{:<5} {kind:<9} raw {:.4}  share {:.4}",
            s.id, res.raw[k], res.normalized[k]
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> robust_lexrank::Result<()> {
    run_example()
}
