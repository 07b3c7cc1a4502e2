//! Side-by-side comparison with the published rank tables of the news cluster.
//!
//! Published values depend on similarity preprocessing that is not fully
//! specified, so this module reports deviations rather than asserting them.

use std::fmt;

use serde::Serialize;

use crate::corpus::SimilarityMatrix;
use crate::error::{Error, Result};
use crate::fixtures;
use crate::graph::{threshold_adjacency, transition_from_similarity};
use crate::matrix_io::fmt_full;
use crate::ranking::{normalize_max_one, power_iteration, DEFAULT_MAX_ITER, DEFAULT_TOL};
use crate::robust::{solve_robust, RobustBudget};

pub const TABLE_BUDGETS: [f64; 3] = [0.01, 5.0, 10.0];
pub const TABLE_THRESHOLDS: [f64; 3] = [0.1, 0.2, 0.3];

/// Node degrees (self loop included) at threshold 0.1 implied by the
/// published small-budget robust column: for a tiny budget the robust rank is
/// the stationary distribution of the undirected random walk, proportional to
/// degree, and the published values are exactly `degree / 9`.
pub const PUBLISHED_DEGREES_AT_0_1: [usize; 11] = [5, 7, 2, 6, 5, 7, 2, 9, 5, 6, 5];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Plain,
    Robust,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Plain => "plain",
            Method::Robust => "robust",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReferenceCell {
    pub budget: f64,
    pub threshold: f64,
    pub method: Method,
    pub id: String,
    pub value: f64,
}

/// Parses the bundled reference values.
pub fn reference_cells() -> Result<Vec<ReferenceCell>> {
    let origin = "reference_ranks.csv";
    let mut cells = Vec::new();
    for (idx, line) in fixtures::REFERENCE_RANKS_CSV.lines().enumerate().skip(1) {
        if line.trim().is_empty() {
            continue;
        }
        let parse_err = |message: String| Error::Parse {
            path: origin.into(),
            line: idx + 1,
            message,
        };
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 5 {
            return Err(parse_err(format!(
                "expected 5 fields, found {}",
                fields.len()
            )));
        }
        let num = |s: &str| {
            s.parse::<f64>()
                .map_err(|e| parse_err(format!("bad number {s:?}: {e}")))
        };
        let method = match fields[2] {
            "plain" => Method::Plain,
            "robust" => Method::Robust,
            other => return Err(parse_err(format!("unknown method {other:?}"))),
        };
        cells.push(ReferenceCell {
            budget: num(fields[0])?,
            threshold: num(fields[1])?,
            method,
            id: fields[3].to_string(),
            value: num(fields[4])?,
        });
    }
    Ok(cells)
}

/// One (budget, threshold, method) column of the comparison.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableColumn {
    pub budget: f64,
    pub threshold: f64,
    pub method: Method,
    pub ours: Vec<f64>,
    pub published: Vec<f64>,
    pub deviation: Vec<f64>,
}

impl TableColumn {
    pub fn label(&self) -> String {
        format!("{}@{}/eps={}", self.method, self.threshold, self.budget)
    }

    pub fn max_deviation(&self) -> f64 {
        self.deviation.iter().copied().fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableReport {
    pub ids: Vec<String>,
    pub columns: Vec<TableColumn>,
}

impl TableReport {
    pub fn column(&self, budget: f64, threshold: f64, method: Method) -> Option<&TableColumn> {
        self.columns
            .iter()
            .find(|c| c.budget == budget && c.threshold == threshold && c.method == method)
    }

    /// One row per sentence; each column contributes `ours`, `published` and `deviation`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("id");
        for c in &self.columns {
            let l = c.label();
            out.push_str(&format!(",{l}:ours,{l}:published,{l}:deviation"));
        }
        out.push('\n');
        for (i, id) in self.ids.iter().enumerate() {
            out.push_str(id);
            for c in &self.columns {
                out.push_str(&format!(
                    ",{},{},{}",
                    fmt_full(c.ours[i]),
                    c.published[i],
                    fmt_full(c.deviation[i])
                ));
            }
            out.push('\n');
        }
        out
    }
}

/// Ranks every (budget, threshold, method) combination of the published
/// tables on `similarity` and lines them up with the reference values.
pub fn reproduce_tables(ids: &[String], similarity: &SimilarityMatrix) -> Result<TableReport> {
    if ids.len() != similarity.len() {
        return Err(Error::Model(format!(
            "{} ids for {} sentences",
            ids.len(),
            similarity.len()
        )));
    }
    let cells = reference_cells()?;
    let mut columns = Vec::new();
    for &budget in &TABLE_BUDGETS {
        for &threshold in &TABLE_THRESHOLDS {
            let p = transition_from_similarity(similarity, threshold)?;
            for method in [Method::Plain, Method::Robust] {
                let ours = match method {
                    Method::Plain => normalize_max_one(
                        power_iteration(&p, DEFAULT_TOL, DEFAULT_MAX_ITER)?.values(),
                    )?,
                    Method::Robust => {
                        let b = RobustBudget::uniform(budget, budget, ids.len())?;
                        solve_robust(&p, &b, ids)?.reported.normalized()
                    }
                };
                let published = ids
                    .iter()
                    .map(|id| {
                        cells
                            .iter()
                            .find(|c| {
                                c.budget == budget
                                    && c.threshold == threshold
                                    && c.method == method
                                    && &c.id == id
                            })
                            .map(|c| c.value)
                            .ok_or_else(|| {
                                Error::Model(format!(
                                    "no reference value for {id} at {method}/{threshold}/{budget}"
                                ))
                            })
                    })
                    .collect::<Result<Vec<f64>>>()?;
                let deviation = ours
                    .iter()
                    .zip(&published)
                    .map(|(a, b)| (a - b).abs())
                    .collect();
                columns.push(TableColumn {
                    budget,
                    threshold,
                    method,
                    ours,
                    published,
                    deviation,
                });
            }
        }
    }
    Ok(TableReport {
        ids: ids.to_vec(),
        columns,
    })
}

/// Whether `similarity` yields the graph implied by the published values.
pub fn matches_published_graph(similarity: &SimilarityMatrix) -> Result<bool> {
    Ok(threshold_adjacency(similarity, 0.1)?.degrees() == PUBLISHED_DEGREES_AT_0_1)
}
