//! Bundled data: the eleven-sentence news cluster, its similarity matrix,
//! reference table values and ten template sentences used as generated text.

use crate::corpus::{Corpus, Sentence, SimilarityMatrix};
use crate::error::Result;

pub const NEWS_CLUSTER_TSV: &str = include_str!("../data/news_cluster.tsv");
pub const NEWS_CLUSTER_SIMILARITY_CSV: &str = include_str!("../data/news_cluster_similarity.csv");
pub const REFERENCE_RANKS_CSV: &str = include_str!("../data/reference_ranks.csv");
pub const TEMPLATES_TXT: &str = include_str!("../data/lexrank_templates.txt");

/// The news cluster, all sentences verified.
pub fn news_cluster() -> Result<Corpus> {
    Corpus::parse(NEWS_CLUSTER_TSV, "news_cluster.tsv")
}

/// Pairwise similarities of [`news_cluster`] computed by an independent
/// implementation of the same preprocessing.
pub fn news_cluster_similarity() -> Result<SimilarityMatrix> {
    SimilarityMatrix::from_csv(NEWS_CLUSTER_SIMILARITY_CSV, "news_cluster_similarity.csv")
}

/// The template sentences with ids `g1` … `g10`.
pub fn templates() -> Vec<Sentence> {
    TEMPLATES_TXT
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .enumerate()
        .map(|(k, body)| Sentence::new(format!("g{}", k + 1), body))
        .collect()
}

/// News cluster as verified sentences followed by the templates as generated ones.
pub fn news_cluster_with_templates() -> Result<Corpus> {
    Corpus::with_generated(news_cluster()?.sentences().to_vec(), templates())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_load() {
        let c = news_cluster().unwrap();
        assert_eq!(c.len(), 11);
        assert_eq!(c.ids()[0], "d1s1");
        assert_eq!(news_cluster_similarity().unwrap().len(), 11);
        assert_eq!(templates().len(), 10);
        let aug = news_cluster_with_templates().unwrap();
        assert_eq!((aug.n_verified(), aug.n_generated()), (11, 10));
    }
}
