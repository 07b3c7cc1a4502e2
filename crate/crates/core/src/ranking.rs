//! Classic LexRank: the dominant eigenvector of `P` on the simplex.

use nalgebra::DVector;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::TransitionMatrix;

pub const DEFAULT_TOL: f64 = 1e-12;
pub const DEFAULT_MAX_ITER: usize = 100_000;

/// A point of the standard simplex.
#[derive(Debug, Clone, PartialEq)]
pub struct RankVector(Vec<f64>);

impl RankVector {
    pub const SUM_TOL: f64 = 1e-10;

    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Parameter("rank vector is empty".into()));
        }
        if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::Parameter(
                "rank vector has a negative or non-finite entry".into(),
            ));
        }
        let sum: f64 = values.iter().sum();
        if (sum - 1.0).abs() > Self::SUM_TOL {
            return Err(Error::Parameter(format!(
                "rank vector sums to {sum}, not 1"
            )));
        }
        Ok(Self(values))
    }

    /// Rescales a nonnegative vector onto the simplex. Tiny negative
    /// round-off from an LP solve is clipped first.
    pub fn from_nonnegative(values: Vec<f64>) -> Result<Self> {
        let clipped: Vec<f64> = values.into_iter().map(|v| v.max(0.0)).collect();
        let sum: f64 = clipped.iter().sum();
        if !(sum > 0.0) {
            return Err(Error::Normalization);
        }
        Self::new(clipped.into_iter().map(|v| v / sum).collect())
    }

    pub fn uniform(n: usize) -> Self {
        Self(vec![1.0 / n as f64; n])
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_dvector(&self) -> DVector<f64> {
        DVector::from_column_slice(&self.0)
    }

    /// Index of the largest entry; the lowest index wins ties.
    pub fn argmax(&self) -> usize {
        argmax(&self.0)
    }
}

pub(crate) fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if *v > values[best] {
            best = i;
        }
    }
    best
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankEntry {
    pub id: String,
    pub score: f64,
    pub normalized: f64,
}

/// Per-sentence scores scaled so the largest equals exactly one.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct ReportedRanks {
    entries: Vec<RankEntry>,
}

impl ReportedRanks {
    pub fn new(ids: &[String], scores: &[f64]) -> Result<Self> {
        if ids.len() != scores.len() {
            return Err(Error::Parameter(format!(
                "{} ids for {} scores",
                ids.len(),
                scores.len()
            )));
        }
        let normalized = normalize_max_one(scores)?;
        let entries = ids
            .iter()
            .zip(scores)
            .zip(normalized)
            .map(|((id, &score), normalized)| RankEntry {
                id: id.clone(),
                score,
                normalized,
            })
            .collect();
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &[RankEntry] {
        &self.entries
    }

    pub fn normalized(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.normalized).collect()
    }

    pub fn get(&self, id: &str) -> Option<&RankEntry> {
        self.entries.iter().find(|e| e.id == id)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("id,score,normalized\n");
        for e in &self.entries {
            out.push_str(&format!(
                "{},{},{}\n",
                e.id,
                crate::matrix_io::fmt_full(e.score),
                crate::matrix_io::fmt_full(e.normalized)
            ));
        }
        out
    }
}

/// Divides every score by the largest one.
pub fn normalize_max_one(scores: &[f64]) -> Result<Vec<f64>> {
    let max = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !(max > 0.0) || !max.is_finite() {
        return Err(Error::Normalization);
    }
    Ok(scores.iter().map(|v| v / max).collect())
}

/// `‖P x − x‖₁`.
pub fn eigen_residual(p: &TransitionMatrix, x: &[f64]) -> f64 {
    let xv = DVector::from_column_slice(x);
    (p.values() * &xv - &xv).abs().sum()
}

/// Power iteration from the uniform vector, renormalizing every iterate.
///
/// For reducible `P` the fixed point depends on the start; starting from
/// uniform keeps the answer deterministic.
pub fn power_iteration(p: &TransitionMatrix, tol: f64, max_iter: usize) -> Result<RankVector> {
    if !(tol > 0.0) {
        return Err(Error::Parameter(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    if max_iter == 0 {
        return Err(Error::Parameter("max_iter must be at least 1".into()));
    }
    let n = p.len();
    let mut x = DVector::from_element(n, 1.0 / n as f64);
    let mut residual = f64::INFINITY;
    for _ in 0..max_iter {
        let y = p.values() * &x;
        residual = (&y - &x).abs().sum();
        if residual <= tol {
            return RankVector::new(x.iter().copied().collect());
        }
        let sum = y.sum();
        x = y / sum;
    }
    Err(Error::Convergence {
        iterations: max_iter,
        residual,
    })
}
