// Idf-modified cosine similarities of the bundled news cluster and the
// degree of every sentence at the three published thresholds.

use robust_lexrank::graph::threshold_adjacency;
use robust_lexrank::{build_similarity_matrix, fixtures};

pub fn run_example() -> robust_lexrank::Result<()> {
    let corpus = fixtures::news_cluster()?;
    let sim = build_similarity_matrix(&corpus)?;
    let ids = corpus.ids();

    print!("{:>6}", "");
    for id in &ids {
        print!("{id:>6}");
    }
    println!();
    for (i, id) in ids.iter().enumerate() {
        print!("{id:>6}");
        for j in 0..ids.len() {
            print!("{:>6.2}", sim.get(i, j));
        }
        println!();
    }

    for t in [0.1, 0.2, 0.3] {
        println!(
            "degrees at {t}: {:?}",
            threshold_adjacency(&sim, t)?.degrees()
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> robust_lexrank::Result<()> {
    run_example()
}
