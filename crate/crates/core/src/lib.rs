//! LexRank and l1-robust LexRank.
//!
//! Sentences become a thresholded similarity graph whose column-stochastic
//! transition matrix `P` is ranked either by its dominant eigenvector
//! ([`ranking::power_iteration`]) or by a linear program that hedges against
//! l1-bounded perturbations of `P` and against sentences that have not been
//! seen yet ([`robust::solve_robust`]).
//!
//! ```
//! use robust_lexrank::{fixtures, graph, ranking, robust};
//!
//! let corpus = fixtures::news_cluster()?;
//! let sim = robust_lexrank::corpus::build_similarity_matrix(&corpus)?;
//! let p = graph::transition_from_similarity(&sim, 0.1)?;
//! let budget = robust::RobustBudget::uniform(0.01, 0.01, corpus.len())?;
//! let ranks = robust::solve_robust(&p, &budget, &corpus.ids())?;
//! assert_eq!(ranks.reported.len(), 11);
//! # let _ = ranking::DEFAULT_TOL;
//! # Ok::<(), robust_lexrank::Error>(())
//! ```

pub mod cli;
pub mod corpus;
pub mod dualnorms;
pub mod error;
pub mod fixtures;
pub mod graph;
pub mod lp;
pub mod matrix_io;
pub mod ranking;
pub mod robust;
pub mod simulator;
pub mod tables;
pub mod verify;

pub use corpus::{build_similarity_matrix, Corpus, Sentence, SimilarityMatrix};
pub use error::{Error, Result};
pub use graph::{
    threshold_adjacency, to_transition, transition_from_similarity, AdjacencyMatrix,
    TransitionMatrix,
};
pub use lp::{LinearProgram, LinearProgramSolution, Relation, Status};
pub use ranking::{normalize_max_one, power_iteration, RankVector, ReportedRanks};
pub use robust::{comparative_rank, solve_robust, GrowthModel, RobustBudget};
