//! Row-major CSV for dense matrices and vectors: no header, 17 significant digits.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Formats a value with 17 significant digits.
pub fn fmt_full(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn to_csv(m: &DMatrix<f64>) -> String {
    let mut out = String::new();
    for i in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols()).map(|j| fmt_full(m[(i, j)])).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn from_csv(text: &str, origin: &str) -> Result<DMatrix<f64>> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let row = line
            .split(',')
            .map(|cell| {
                cell.trim().parse::<f64>().map_err(|e| Error::Parse {
                    path: origin.to_string(),
                    line: idx + 1,
                    message: format!("bad number {cell:?}: {e}"),
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(Error::Parse {
                    path: origin.to_string(),
                    line: idx + 1,
                    message: format!("expected {} columns, found {}", first.len(), row.len()),
                });
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Parse {
            path: origin.to_string(),
            line: 0,
            message: "empty matrix".into(),
        });
    }
    let ncols = rows[0].len();
    Ok(DMatrix::from_fn(rows.len(), ncols, |i, j| rows[i][j]))
}

/// Reads a vector written either as one row or as one value per line.
pub fn vector_from_csv(text: &str, origin: &str) -> Result<DVector<f64>> {
    let m = from_csv(text, origin)?;
    if m.nrows() == 1 || m.ncols() == 1 {
        Ok(DVector::from_iterator(m.len(), m.iter().copied()))
    } else {
        Err(Error::Parse {
            path: origin.to_string(),
            line: 0,
            message: format!(
                "expected a vector, found a {}x{} matrix",
                m.nrows(),
                m.ncols()
            ),
        })
    }
}
