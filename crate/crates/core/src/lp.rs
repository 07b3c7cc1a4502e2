//! Dense two-phase primal simplex for small linear programs.
//!
//! Models are `min cᵀx` subject to row constraints (`≤`, `=`, `≥`) and
//! per-variable bounds that may be infinite. Internally every variable is
//! shifted or split to be nonnegative, equalities become a `≤`/`≥` pair, and
//! a tableau is pivoted with Dantzig's rule, falling back to Bland's rule
//! once the iteration count passes `2·(rows + cols)`.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// Pivot and reduced-cost tolerance.
pub const PIVOT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ge => ">=",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub coeffs: Vec<f64>,
    pub relation: Relation,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    objective: Vec<f64>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    constraints: Vec<Constraint>,
    names: Vec<String>,
}

impl LinearProgram {
    /// Minimization of `objective · x` with every variable in `[0, +∞)`.
    pub fn new(objective: Vec<f64>) -> Self {
        let n = objective.len();
        Self {
            objective,
            lower: vec![0.0; n],
            upper: vec![f64::INFINITY; n],
            constraints: Vec::new(),
            names: (0..n).map(|i| format!("v{i}")).collect(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn num_constraints(&self) -> usize {
        self.constraints.len()
    }

    pub fn objective(&self) -> &[f64] {
        &self.objective
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn bounds(&self, var: usize) -> (f64, f64) {
        (self.lower[var], self.upper[var])
    }

    pub fn set_bounds(&mut self, var: usize, lower: f64, upper: f64) -> &mut Self {
        self.lower[var] = lower;
        self.upper[var] = upper;
        self
    }

    pub fn set_free(&mut self, var: usize) -> &mut Self {
        self.set_bounds(var, f64::NEG_INFINITY, f64::INFINITY)
    }

    pub fn set_name(&mut self, var: usize, name: impl Into<String>) -> &mut Self {
        self.names[var] = name.into();
        self
    }

    pub fn name(&self, var: usize) -> &str {
        &self.names[var]
    }

    /// Adds a dense row. Width must match the objective.
    pub fn add_constraint(
        &mut self,
        coeffs: Vec<f64>,
        relation: Relation,
        rhs: f64,
    ) -> Result<&mut Self> {
        if coeffs.len() != self.objective.len() {
            return Err(Error::Model(format!(
                "constraint has {} coefficients, model has {} variables",
                coeffs.len(),
                self.objective.len()
            )));
        }
        if !rhs.is_finite() || coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::Model("constraint has a non-finite entry".into()));
        }
        self.constraints.push(Constraint {
            coeffs,
            relation,
            rhs,
        });
        Ok(self)
    }

    /// Adds a row given as `(variable, coefficient)` pairs.
    pub fn add_sparse(
        &mut self,
        terms: &[(usize, f64)],
        relation: Relation,
        rhs: f64,
    ) -> Result<&mut Self> {
        let mut coeffs = vec![0.0; self.objective.len()];
        for &(var, c) in terms {
            if var >= coeffs.len() {
                return Err(Error::Model(format!("variable index {var} out of range")));
            }
            coeffs[var] += c;
        }
        self.add_constraint(coeffs, relation, rhs)
    }

    pub fn evaluate(&self, x: &[f64]) -> f64 {
        self.objective.iter().zip(x).map(|(c, v)| c * v).sum()
    }

    /// Largest violation of any constraint or bound at `x`.
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, v) in x.iter().enumerate() {
            worst = worst.max(self.lower[i] - v).max(v - self.upper[i]);
        }
        for c in &self.constraints {
            let lhs: f64 = c.coeffs.iter().zip(x).map(|(a, v)| a * v).sum();
            let gap = match c.relation {
                Relation::Le => lhs - c.rhs,
                Relation::Ge => c.rhs - lhs,
                Relation::Eq => (lhs - c.rhs).abs(),
            };
            worst = worst.max(gap);
        }
        worst
    }

    fn validate(&self) -> Result<()> {
        let n = self.objective.len();
        if self.objective.iter().any(|c| !c.is_finite()) {
            return Err(Error::Model(
                "objective has a non-finite coefficient".into(),
            ));
        }
        if self.lower.len() != n || self.upper.len() != n {
            return Err(Error::Model(
                "bounds do not match the number of variables".into(),
            ));
        }
        for c in &self.constraints {
            if c.coeffs.len() != n {
                return Err(Error::Model("constraint width mismatch".into()));
            }
        }
        for i in 0..n {
            if self.lower[i].is_nan()
                || self.upper[i].is_nan()
                || self.lower[i] == f64::INFINITY
                || self.upper[i] == f64::NEG_INFINITY
            {
                return Err(Error::Model(format!(
                    "variable {} has invalid bounds",
                    self.names[i]
                )));
            }
        }
        Ok(())
    }

    /// Plain-text dump in an LP-file-like layout, for inspection.
    pub fn to_lp_text(&self) -> String {
        fn terms(coeffs: &[f64], names: &[String]) -> String {
            let parts: Vec<String> = coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| **c != 0.0)
                .map(|(i, c)| format!("{c:+} {}", names[i]))
                .collect();
            if parts.is_empty() {
                "0".into()
            } else {
                parts.join(" ")
            }
        }
        let mut out = String::from("Minimize\n");
        out.push_str(&format!("  obj: {}\n", terms(&self.objective, &self.names)));
        out.push_str("Subject To\n");
        for (k, c) in self.constraints.iter().enumerate() {
            out.push_str(&format!(
                "  c{k}: {} {} {}\n",
                terms(&c.coeffs, &self.names),
                c.relation,
                c.rhs
            ));
        }
        out.push_str("Bounds\n");
        for i in 0..self.num_vars() {
            out.push_str(&format!(
                "  {} <= {} <= {}\n",
                self.lower[i], self.names[i], self.upper[i]
            ));
        }
        out.push_str("End\n");
        out
    }

    pub fn solve(&self) -> Result<LinearProgramSolution> {
        solve(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Optimal,
    Infeasible,
    Unbounded,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Optimal => "optimal",
            Status::Infeasible => "infeasible",
            Status::Unbounded => "unbounded",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LinearProgramSolution {
    pub status: Status,
    /// Primal point; empty unless optimal.
    pub x: Vec<f64>,
    pub objective_value: f64,
}

impl LinearProgramSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == Status::Optimal
    }

    /// Turns a non-optimal status into an error.
    pub fn into_optimal(self) -> Result<Self> {
        match self.status {
            Status::Optimal => Ok(self),
            other => Err(Error::Solver(other)),
        }
    }
}

/// How an original variable maps onto nonnegative tableau columns.
#[derive(Debug, Clone, Copy)]
enum VarMap {
    /// `x = offset + y`
    Shifted { col: usize, offset: f64 },
    /// `x = offset - y`
    Mirrored { col: usize, offset: f64 },
    /// `x = y⁺ - y⁻`
    Split { pos: usize, neg: usize },
}

struct Row {
    coeffs: Vec<f64>,
    relation: Relation,
    rhs: f64,
}

struct Tableau {
    /// `(m + 1) × (cols + 1)`, row-major; the last row holds reduced costs
    /// and the last column the right-hand side.
    data: Vec<f64>,
    m: usize,
    cols: usize,
    basis: Vec<usize>,
    /// Columns allowed to enter the basis.
    eligible: Vec<bool>,
}

enum Outcome {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn width(&self) -> usize {
        self.cols + 1
    }

    fn at(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.width() + c]
    }

    fn rhs(&self, r: usize) -> f64 {
        self.at(r, self.cols)
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let w = self.width();
        let p = self.data[r * w + c];
        for k in 0..w {
            self.data[r * w + k] /= p;
        }
        self.data[r * w + c] = 1.0;
        let pivot_row: Vec<f64> = self.data[r * w..(r + 1) * w].to_vec();
        for i in 0..=self.m {
            if i == r {
                continue;
            }
            let factor = self.data[i * w + c];
            if factor == 0.0 {
                continue;
            }
            for k in 0..w {
                self.data[i * w + k] -= factor * pivot_row[k];
            }
            self.data[i * w + c] = 0.0;
        }
        self.basis[r] = c;
    }

    /// Installs `costs` as the objective row and prices out the basis.
    fn set_objective(&mut self, costs: &[f64]) {
        let w = self.width();
        let obj = self.m * w;
        for k in 0..w {
            self.data[obj + k] = if k < self.cols { costs[k] } else { 0.0 };
        }
        for r in 0..self.m {
            let cb = costs[self.basis[r]];
            if cb != 0.0 {
                for k in 0..w {
                    self.data[obj + k] -= cb * self.data[r * w + k];
                }
            }
        }
    }

    fn run(&mut self) -> Result<Outcome> {
        let bland_after = 2 * (self.m + self.cols);
        let hard_cap = 50 * (self.m + self.cols) + 10_000;
        let obj = self.m;
        for iter in 0..hard_cap {
            let use_bland = iter >= bland_after;
            let mut entering = None;
            let mut best = -PIVOT_TOL;
            for c in 0..self.cols {
                if !self.eligible[c] {
                    continue;
                }
                let rc = self.at(obj, c);
                if rc < -PIVOT_TOL {
                    if use_bland {
                        entering = Some(c);
                        break;
                    }
                    if rc < best {
                        best = rc;
                        entering = Some(c);
                    }
                }
            }
            let Some(c) = entering else {
                return Ok(Outcome::Optimal);
            };
            let mut leaving: Option<(usize, f64)> = None;
            for r in 0..self.m {
                let a = self.at(r, c);
                if a > PIVOT_TOL {
                    let ratio = self.rhs(r).max(0.0) / a;
                    leaving = match leaving {
                        None => Some((r, ratio)),
                        Some((lr, lratio)) => {
                            let tie = (ratio - lratio).abs() <= PIVOT_TOL * (1.0 + lratio.abs());
                            if ratio < lratio && !tie {
                                Some((r, ratio))
                            } else if tie && self.basis[r] < self.basis[lr] {
                                Some((r, ratio.min(lratio)))
                            } else {
                                Some((lr, lratio))
                            }
                        }
                    };
                }
            }
            let Some((r, _)) = leaving else {
                return Ok(Outcome::Unbounded);
            };
            self.pivot(r, c);
        }
        Err(Error::Numeric {
            what: "simplex iteration cap reached".into(),
            gap: f64::NAN,
        })
    }
}

/// Solves `lp` to optimality, or reports infeasibility / unboundedness.
pub fn solve(lp: &LinearProgram) -> Result<LinearProgramSolution> {
    lp.validate()?;
    let n = lp.num_vars();

    // Column layout for the nonnegative variables.
    let mut maps = Vec::with_capacity(n);
    let mut ncols = 0;
    let mut bound_rows: Vec<(usize, f64)> = Vec::new();
    for i in 0..n {
        let (lo, hi) = (lp.lower[i], lp.upper[i]);
        if lo > hi {
            return Ok(infeasible());
        }
        let map = if lo.is_finite() {
            if hi.is_finite() {
                bound_rows.push((ncols, hi - lo));
            }
            VarMap::Shifted {
                col: ncols,
                offset: lo,
            }
        } else if hi.is_finite() {
            VarMap::Mirrored {
                col: ncols,
                offset: hi,
            }
        } else {
            ncols += 1;
            VarMap::Split {
                pos: ncols - 1,
                neg: ncols,
            }
        };
        ncols += 1;
        maps.push(map);
    }
    let nstruct = ncols;

    // Objective over the new columns plus a constant.
    let mut costs = vec![0.0; nstruct];
    let mut constant = 0.0;
    for (i, map) in maps.iter().enumerate() {
        let c = lp.objective[i];
        match *map {
            VarMap::Shifted { col, offset } => {
                costs[col] += c;
                constant += c * offset;
            }
            VarMap::Mirrored { col, offset } => {
                costs[col] -= c;
                constant += c * offset;
            }
            VarMap::Split { pos, neg } => {
                costs[pos] += c;
                costs[neg] -= c;
            }
        }
    }

    let mut rows: Vec<Row> = Vec::new();
    for con in &lp.constraints {
        let mut coeffs = vec![0.0; nstruct];
        let mut rhs = con.rhs;
        for (i, map) in maps.iter().enumerate() {
            let a = con.coeffs[i];
            if a == 0.0 {
                continue;
            }
            match *map {
                VarMap::Shifted { col, offset } => {
                    coeffs[col] += a;
                    rhs -= a * offset;
                }
                VarMap::Mirrored { col, offset } => {
                    coeffs[col] -= a;
                    rhs -= a * offset;
                }
                VarMap::Split { pos, neg } => {
                    coeffs[pos] += a;
                    coeffs[neg] -= a;
                }
            }
        }
        match con.relation {
            Relation::Eq => {
                rows.push(Row {
                    coeffs: coeffs.clone(),
                    relation: Relation::Le,
                    rhs,
                });
                rows.push(Row {
                    coeffs,
                    relation: Relation::Ge,
                    rhs,
                });
            }
            relation => rows.push(Row {
                coeffs,
                relation,
                rhs,
            }),
        }
    }
    for (col, width) in bound_rows {
        let mut coeffs = vec![0.0; nstruct];
        coeffs[col] = 1.0;
        rows.push(Row {
            coeffs,
            relation: Relation::Le,
            rhs: width,
        });
    }
    for row in &mut rows {
        if row.rhs < 0.0 {
            row.rhs = -row.rhs;
            row.coeffs.iter_mut().for_each(|a| *a = -*a);
            row.relation = match row.relation {
                Relation::Le => Relation::Ge,
                Relation::Ge => Relation::Le,
                Relation::Eq => Relation::Eq,
            };
        }
    }

    // Slack/surplus per row, artificial per `≥` row.
    let m = rows.len();
    let n_art = rows.iter().filter(|r| r.relation == Relation::Ge).count();
    let slack0 = nstruct;
    let art0 = nstruct + m;
    let cols = art0 + n_art;
    let width = cols + 1;
    let mut data = vec![0.0; (m + 1) * width];
    let mut basis = vec![0; m];
    let mut next_art = art0;
    for (r, row) in rows.iter().enumerate() {
        data[r * width..r * width + nstruct].copy_from_slice(&row.coeffs);
        data[r * width + cols] = row.rhs;
        match row.relation {
            Relation::Le => {
                data[r * width + slack0 + r] = 1.0;
                basis[r] = slack0 + r;
            }
            _ => {
                data[r * width + slack0 + r] = -1.0;
                data[r * width + next_art] = 1.0;
                basis[r] = next_art;
                next_art += 1;
            }
        }
    }
    let mut tab = Tableau {
        data,
        m,
        cols,
        basis,
        eligible: vec![true; cols],
    };

    if n_art > 0 {
        let mut phase1 = vec![0.0; cols];
        phase1[art0..].iter_mut().for_each(|c| *c = 1.0);
        tab.set_objective(&phase1);
        tab.run()?;
        let infeasibility = -tab.at(m, cols);
        let scale = 1.0 + rows.iter().map(|r| r.rhs.abs()).fold(0.0, f64::max);
        if infeasibility > 1e-9 * scale {
            return Ok(infeasible());
        }
        // Pivot zero-level artificials out where a structural column allows it.
        for r in 0..m {
            if tab.basis[r] >= art0 {
                let candidate = (0..art0).find(|&c| tab.at(r, c).abs() > PIVOT_TOL);
                if let Some(c) = candidate {
                    tab.pivot(r, c);
                }
            }
        }
        for c in art0..cols {
            tab.eligible[c] = false;
        }
    }

    let mut phase2 = vec![0.0; cols];
    phase2[..nstruct].copy_from_slice(&costs);
    tab.set_objective(&phase2);
    if let Outcome::Unbounded = tab.run()? {
        return Ok(LinearProgramSolution {
            status: Status::Unbounded,
            x: Vec::new(),
            objective_value: f64::NEG_INFINITY,
        });
    }

    let mut y = vec![0.0; cols];
    for r in 0..m {
        y[tab.basis[r]] = tab.rhs(r);
    }
    let x: Vec<f64> = maps
        .iter()
        .map(|map| match *map {
            VarMap::Shifted { col, offset } => offset + y[col],
            VarMap::Mirrored { col, offset } => offset - y[col],
            VarMap::Split { pos, neg } => y[pos] - y[neg],
        })
        .collect();
    let objective_value = lp.evaluate(&x);
    debug_assert!(
        (objective_value - (constant - tab.at(m, cols))).abs()
            <= 1e-6 * (1.0 + objective_value.abs())
    );
    Ok(LinearProgramSolution {
        status: Status::Optimal,
        x,
        objective_value,
    })
}

fn infeasible() -> LinearProgramSolution {
    LinearProgramSolution {
        status: Status::Infeasible,
        x: Vec::new(),
        objective_value: f64::INFINITY,
    }
}
