//! Thresholded similarity graphs and their column-stochastic transition matrices.

use nalgebra::DMatrix;

use crate::corpus::SimilarityMatrix;
use crate::error::{Error, Result};
use crate::matrix_io;

/// Binary adjacency obtained by keeping similarities at or above a threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct AdjacencyMatrix {
    values: DMatrix<f64>,
    threshold: Option<f64>,
}

impl AdjacencyMatrix {
    /// Hand-built adjacency: entries must be 0 or 1 and the matrix symmetric.
    pub fn from_binary(values: DMatrix<f64>) -> Result<Self> {
        let n = values.nrows();
        if values.ncols() != n {
            return Err(Error::Construction(
                "adjacency matrix must be square".into(),
            ));
        }
        for i in 0..n {
            for j in 0..n {
                let v = values[(i, j)];
                if v != 0.0 && v != 1.0 {
                    return Err(Error::Construction(format!(
                        "entry ({i},{j}) = {v} is not binary"
                    )));
                }
                if v != values[(j, i)] {
                    return Err(Error::Construction(format!(
                        "adjacency not symmetric at ({i},{j})"
                    )));
                }
            }
        }
        Ok(Self {
            values,
            threshold: None,
        })
    }

    pub fn values(&self) -> &DMatrix<f64> {
        &self.values
    }

    /// `None` for hand-built matrices.
    pub fn threshold(&self) -> Option<f64> {
        self.threshold
    }

    pub fn len(&self) -> usize {
        self.values.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.values.nrows() == 0
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.values
            .row_iter()
            .map(|r| r.iter().filter(|&&v| v != 0.0).count())
            .collect()
    }
}

/// Entry `(i, j)` is 1 iff `similarity(i, j) >= threshold`.
pub fn threshold_adjacency(
    similarity: &SimilarityMatrix,
    threshold: f64,
) -> Result<AdjacencyMatrix> {
    if !(0.0..=1.0).contains(&threshold) {
        return Err(Error::Parameter(format!(
            "threshold {threshold} outside [0, 1]"
        )));
    }
    let values = similarity
        .values()
        .map(|s| if s >= threshold { 1.0 } else { 0.0 });
    Ok(AdjacencyMatrix {
        values,
        threshold: Some(threshold),
    })
}

/// Column-stochastic matrix `P` with `P[i][j] >= 0` and unit column sums.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionMatrix(DMatrix<f64>);

impl TransitionMatrix {
    pub const COLUMN_SUM_TOL: f64 = 1e-12;

    pub fn new(values: DMatrix<f64>) -> Result<Self> {
        let n = values.nrows();
        if n == 0 || values.ncols() != n {
            return Err(Error::Construction(format!(
                "transition matrix must be square and nonempty, got {}x{}",
                values.nrows(),
                values.ncols()
            )));
        }
        if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::Construction(
                "transition matrix has a negative or non-finite entry".into(),
            ));
        }
        for (j, col) in values.column_iter().enumerate() {
            let sum: f64 = col.iter().sum();
            if (sum - 1.0).abs() > Self::COLUMN_SUM_TOL {
                return Err(Error::Construction(format!(
                    "column {j} sums to {sum}, not 1"
                )));
            }
        }
        Ok(Self(values))
    }

    pub fn identity(n: usize) -> Self {
        Self(DMatrix::identity(n, n))
    }

    pub fn values(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.0.nrows() == 0
    }

    pub fn to_csv(&self) -> String {
        matrix_io::to_csv(&self.0)
    }

    pub fn from_csv(text: &str, origin: &str) -> Result<Self> {
        Self::new(matrix_io::from_csv(text, origin)?)
    }
}

/// Divides each row of `A` by its sum and transposes the result, giving
/// `P[i][j] = A[j][i] / rowsum(A, j)`.
pub fn to_transition(adjacency: &AdjacencyMatrix) -> Result<TransitionMatrix> {
    let a = &adjacency.values;
    let n = a.nrows();
    let mut p = DMatrix::zeros(n, n);
    for j in 0..n {
        let row_sum: f64 = a.row(j).iter().sum();
        if row_sum <= 0.0 {
            return Err(Error::Construction(format!(
                "adjacency row {j} has no nonzero entry"
            )));
        }
        for i in 0..n {
            p[(i, j)] = a[(j, i)] / row_sum;
        }
    }
    Ok(TransitionMatrix(p))
}

/// Similarity matrix straight to transition matrix.
pub fn transition_from_similarity(
    similarity: &SimilarityMatrix,
    threshold: f64,
) -> Result<TransitionMatrix> {
    to_transition(&threshold_adjacency(similarity, threshold)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::dmatrix;
    use proptest::prelude::*;

    fn sim(values: DMatrix<f64>) -> SimilarityMatrix {
        SimilarityMatrix::from_matrix(values).unwrap()
    }

    #[test]
    fn identity_similarity_gives_identity_adjacency() {
        let a = threshold_adjacency(&sim(DMatrix::identity(3, 3)), 0.5).unwrap();
        assert_eq!(a.values(), &DMatrix::<f64>::identity(3, 3));
        assert_eq!(a.threshold(), Some(0.5));
    }

    #[test]
    fn threshold_boundary_is_inclusive() {
        let a = threshold_adjacency(&sim(DMatrix::from_element(3, 3, 1.0)), 1.0).unwrap();
        assert_eq!(a.values(), &DMatrix::from_element(3, 3, 1.0));
        let s = sim(dmatrix![1.0, 0.3; 0.3, 1.0]);
        assert_eq!(threshold_adjacency(&s, 0.3).unwrap().values()[(0, 1)], 1.0);
        assert_eq!(
            threshold_adjacency(&s, 0.30001).unwrap().values()[(0, 1)],
            0.0
        );
    }

    #[test]
    fn threshold_out_of_range() {
        let s = sim(DMatrix::identity(2, 2));
        assert!(matches!(
            threshold_adjacency(&s, -0.1),
            Err(Error::Parameter(_))
        ));
        assert!(matches!(
            threshold_adjacency(&s, 1.5),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn identity_and_all_ones_transitions() {
        let p =
            to_transition(&AdjacencyMatrix::from_binary(DMatrix::identity(4, 4)).unwrap()).unwrap();
        assert_eq!(p.values(), &DMatrix::<f64>::identity(4, 4));
        let p =
            to_transition(&AdjacencyMatrix::from_binary(DMatrix::from_element(2, 2, 1.0)).unwrap())
                .unwrap();
        assert_eq!(p.values(), &DMatrix::from_element(2, 2, 0.5));
    }

    #[test]
    fn path_graph_transition_by_hand() {
        // 1 - 2 - 3 with self loops; degrees 2, 3, 2
        let a = AdjacencyMatrix::from_binary(dmatrix![
            1.0, 1.0, 0.0;
            1.0, 1.0, 1.0;
            0.0, 1.0, 1.0
        ])
        .unwrap();
        let p = to_transition(&a).unwrap();
        let expected = dmatrix![
            0.5, 1.0 / 3.0, 0.0;
            0.5, 1.0 / 3.0, 0.5;
            0.0, 1.0 / 3.0, 0.5
        ];
        assert!((p.values() - expected).abs().max() < 1e-15);
        for col in p.values().column_iter() {
            assert!((col.sum() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_row_is_a_construction_error() {
        let a = AdjacencyMatrix::from_binary(dmatrix![1.0, 0.0; 0.0, 0.0]).unwrap();
        assert!(matches!(to_transition(&a), Err(Error::Construction(_))));
    }

    #[test]
    fn transition_validation() {
        assert!(TransitionMatrix::new(dmatrix![0.5, 0.2; 0.5, 0.7]).is_err());
        assert!(TransitionMatrix::new(dmatrix![1.5, 0.0; -0.5, 1.0]).is_err());
        assert!(TransitionMatrix::new(dmatrix![0.0, 1.0; 1.0, 0.0]).is_ok());
    }

    fn random_similarity(n: usize, cells: &[f64]) -> SimilarityMatrix {
        let mut m = DMatrix::identity(n, n);
        let mut k = 0;
        for i in 0..n {
            for j in (i + 1)..n {
                m[(i, j)] = cells[k];
                m[(j, i)] = cells[k];
                k += 1;
            }
        }
        sim(m)
    }

    proptest! {
        #[test]
        fn transition_is_column_stochastic(
            n in 1usize..9,
            cells in prop::collection::vec(0.0f64..=1.0, 36),
            threshold in 0.0f64..=1.0,
        ) {
            let s = random_similarity(n, &cells);
            let a = threshold_adjacency(&s, threshold).unwrap();
            for i in 0..n {
                prop_assert_eq!(a.values()[(i, i)], 1.0);
            }
            prop_assert_eq!(a.values(), &a.values().transpose());
            let p = to_transition(&a).unwrap();
            for col in p.values().column_iter() {
                prop_assert!((col.sum() - 1.0).abs() <= 1e-12);
                prop_assert!(col.iter().all(|&v| v >= 0.0));
            }
        }
    }
}
