//! Robust LexRank as a linear program.
//!
//! The robust rank vector minimizes
//!
//! ```text
//! ‖P x − x‖₁ + ε₁‖λ‖_∞ + Σ ε_j |μ_j|     over x ∈ Σ_N, λ + μ = x
//! ```
//!
//! which is linearized with auxiliaries `s ≥ |Px − x|`, `t ≥ ‖λ‖_∞` and
//! `r ≥ |μ|`. When `M` future sentences are modelled explicitly the vector
//! grows a second block `x⁽²⁾` whose cost is a weighted decomposition norm;
//! the optimum always puts zero mass there.

use serde::Serialize;

use crate::dualnorms::{box_l1_support, BudgetedBox};
use crate::error::{Error, Result};
use crate::graph::TransitionMatrix;
use crate::lp::{LinearProgram, Relation};
use crate::ranking::{eigen_residual, RankVector, ReportedRanks};

/// Perturbation budget on the existing graph: `ε₁` overall and `ε_j` per column.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RobustBudget {
    pub eps1: f64,
    pub eps_col: Vec<f64>,
}

impl RobustBudget {
    pub fn new(eps1: f64, eps_col: Vec<f64>) -> Result<Self> {
        if !eps1.is_finite() || eps1 < 0.0 {
            return Err(Error::Parameter(format!(
                "eps1 = {eps1} must be finite and >= 0"
            )));
        }
        if let Some(bad) = eps_col.iter().find(|e| !e.is_finite() || **e < 0.0) {
            return Err(Error::Parameter(format!(
                "per-column budget {bad} must be finite and >= 0"
            )));
        }
        Ok(Self { eps1, eps_col })
    }

    /// One scalar broadcast to every column.
    pub fn uniform(eps1: f64, eps_col: f64, n: usize) -> Result<Self> {
        Self::new(eps1, vec![eps_col; n])
    }

    pub fn len(&self) -> usize {
        self.eps_col.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eps_col.is_empty()
    }

    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::new(self.eps1 * c, self.eps_col.iter().map(|e| e * c).collect())
    }

    pub fn as_box(&self) -> BudgetedBox {
        BudgetedBox {
            eps_total: self.eps1,
            eps_col: self.eps_col.clone(),
        }
    }
}

/// Budgets for `M` future sentences. Column-stochasticity forces
/// `ε_j⁽ᶻ⁾ + ε_j⁽ᵡ⁾ = 1` for every new column and hence totals summing to `M`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthModel {
    pub m: usize,
    pub eps_zeta_total: f64,
    pub eps_chi_total: f64,
    pub eps_zeta_col: Vec<f64>,
    pub eps_chi_col: Vec<f64>,
}

impl GrowthModel {
    const TOL: f64 = 1e-12;

    pub fn new(
        m: usize,
        eps_zeta_total: f64,
        eps_chi_total: f64,
        eps_zeta_col: Vec<f64>,
        eps_chi_col: Vec<f64>,
    ) -> Result<Self> {
        if eps_zeta_col.len() != m || eps_chi_col.len() != m {
            return Err(Error::SetDefinition(format!(
                "expected {m} per-column budgets, got {} and {}",
                eps_zeta_col.len(),
                eps_chi_col.len()
            )));
        }
        let all = [eps_zeta_total, eps_chi_total]
            .into_iter()
            .chain(eps_zeta_col.iter().copied())
            .chain(eps_chi_col.iter().copied());
        for v in all {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::SetDefinition(format!(
                    "budget {v} must be finite and >= 0"
                )));
            }
        }
        for j in 0..m {
            let sum = eps_zeta_col[j] + eps_chi_col[j];
            if (sum - 1.0).abs() > Self::TOL {
                return Err(Error::SetDefinition(format!(
                    "new column {j}: zeta and chi budgets sum to {sum}, must be 1"
                )));
            }
        }
        if (eps_zeta_total + eps_chi_total - m as f64).abs() > Self::TOL * (1.0 + m as f64) {
            return Err(Error::SetDefinition(format!(
                "total zeta and chi budgets sum to {}, must equal M = {m}",
                eps_zeta_total + eps_chi_total
            )));
        }
        Ok(Self {
            m,
            eps_zeta_total,
            eps_chi_total,
            eps_zeta_col,
            eps_chi_col,
        })
    }

    /// Every new column lets a fraction `zeta_share` of its mass link back
    /// into the existing graph.
    pub fn uniform(m: usize, zeta_share: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&zeta_share) {
            return Err(Error::SetDefinition(format!(
                "zeta share {zeta_share} outside [0, 1]"
            )));
        }
        Self::new(
            m,
            zeta_share * m as f64,
            (1.0 - zeta_share) * m as f64,
            vec![zeta_share; m],
            vec![1.0 - zeta_share; m],
        )
    }

    pub fn none() -> Self {
        Self {
            m: 0,
            eps_zeta_total: 0.0,
            eps_chi_total: 0.0,
            eps_zeta_col: vec![],
            eps_chi_col: vec![],
        }
    }

    /// Outer scale `ε⁽ᶻ⁾ + ε⁽ᵡ⁾ + M` of the new-sentence term.
    pub fn scale(&self) -> f64 {
        self.eps_zeta_total + self.eps_chi_total + self.m as f64
    }

    /// Per-coordinate caps `ε_j⁽ᶻ⁾ + ε_j⁽ᵡ⁾ + 1`.
    pub fn caps(&self) -> Vec<f64> {
        self.eps_zeta_col
            .iter()
            .zip(&self.eps_chi_col)
            .map(|(z, c)| z + c + 1.0)
            .collect()
    }

    /// Norm weights `c_j = caps_j / scale`.
    pub fn norm_weights(&self) -> Vec<f64> {
        let scale = self.scale();
        self.caps().into_iter().map(|c| c / scale).collect()
    }
}

/// Variable layout of an assembled robust model.
#[derive(Debug, Clone, PartialEq)]
pub struct RobustProgram {
    lp: LinearProgram,
    n: usize,
    m: usize,
}

impl RobustProgram {
    pub fn lp(&self) -> &LinearProgram {
        &self.lp
    }

    pub fn into_lp(self) -> LinearProgram {
        self.lp
    }

    /// Columns of the existing-sentence block `x⁽¹⁾`.
    pub fn x1_range(&self) -> std::ops::Range<usize> {
        0..self.n
    }

    /// Columns of the new-sentence block `x⁽²⁾` (empty when `M = 0`).
    pub fn x2_range(&self) -> std::ops::Range<usize> {
        self.n..self.n + self.m
    }
}

struct Builder {
    names: Vec<String>,
    objective: Vec<f64>,
    free: Vec<usize>,
}

impl Builder {
    fn new() -> Self {
        Self {
            names: Vec::new(),
            objective: Vec::new(),
            free: Vec::new(),
        }
    }

    fn block(
        &mut self,
        prefix: &str,
        len: usize,
        cost: impl Fn(usize) -> f64,
        free: bool,
    ) -> usize {
        let start = self.names.len();
        for j in 0..len {
            self.names.push(
                if len == 1 && prefix.len() == 1 && j == 0 && !prefix.starts_with('x') {
                    prefix.to_string()
                } else {
                    format!("{prefix}{}", j + 1)
                },
            );
            self.objective.push(cost(j));
            if free {
                self.free.push(start + j);
            }
        }
        start
    }

    fn finish(self) -> LinearProgram {
        let mut lp = LinearProgram::new(self.objective);
        for (i, name) in self.names.into_iter().enumerate() {
            lp.set_name(i, name);
        }
        for i in self.free {
            lp.set_free(i);
        }
        lp
    }
}

/// `-s ≤ P x − x ≤ s`.
fn add_residual_rows(
    lp: &mut LinearProgram,
    p: &TransitionMatrix,
    x: usize,
    s: usize,
) -> Result<()> {
    let n = p.len();
    let pv = p.values();
    for i in 0..n {
        let mut plus: Vec<(usize, f64)> = (0..n)
            .map(|j| (x + j, pv[(i, j)] - if i == j { 1.0 } else { 0.0 }))
            .filter(|(_, c)| *c != 0.0)
            .collect();
        let mut minus: Vec<(usize, f64)> = plus.iter().map(|&(k, c)| (k, -c)).collect();
        plus.push((s + i, -1.0));
        minus.push((s + i, -1.0));
        lp.add_sparse(&plus, Relation::Le, 0.0)?;
        lp.add_sparse(&minus, Relation::Le, 0.0)?;
    }
    Ok(())
}

/// `-t ≤ x_j − μ_j ≤ t` and `-r_j ≤ μ_j ≤ r_j`.
fn add_decomposition_rows(
    lp: &mut LinearProgram,
    len: usize,
    x: usize,
    t: usize,
    r: usize,
    mu: usize,
) -> Result<()> {
    for j in 0..len {
        lp.add_sparse(
            &[(x + j, 1.0), (mu + j, -1.0), (t, -1.0)],
            Relation::Le,
            0.0,
        )?;
        lp.add_sparse(
            &[(x + j, -1.0), (mu + j, 1.0), (t, -1.0)],
            Relation::Le,
            0.0,
        )?;
    }
    for j in 0..len {
        lp.add_sparse(&[(mu + j, 1.0), (r + j, -1.0)], Relation::Le, 0.0)?;
        lp.add_sparse(&[(mu + j, -1.0), (r + j, -1.0)], Relation::Le, 0.0)?;
    }
    Ok(())
}

fn check_budget(p: &TransitionMatrix, budget: &RobustBudget) -> Result<()> {
    if budget.len() != p.len() {
        return Err(Error::Model(format!(
            "budget has {} columns, transition matrix has {}",
            budget.len(),
            p.len()
        )));
    }
    Ok(())
}

/// The robust ranking LP over `(x, s, t, r, μ)`:
///
/// ```text
/// min 𝟙ᵀs + ε₁t + εᵀr
/// s.t. −s ≤ Px − x ≤ s,  −t𝟙 ≤ x − μ ≤ t𝟙,  −r ≤ μ ≤ r,
///      x, s, t, r ≥ 0,  𝟙ᵀx = 1
/// ```
pub fn assemble_robust_lp(p: &TransitionMatrix, budget: &RobustBudget) -> Result<RobustProgram> {
    assemble_growth_lp(p, budget, &GrowthModel::none())
}

/// The robust model with an explicit block of `M` future sentences:
/// `x = (x⁽¹⁾, x⁽²⁾) ∈ Σ_{N+M}` and the extra cost
/// `(ε⁽ᶻ⁾+ε⁽ᵡ⁾+M)·‖x⁽²⁾‖₍ᵦ₎`, expanded with its own `(t₂, r₂, μ₂)`.
/// With `M = 0` this is exactly [`assemble_robust_lp`].
pub fn assemble_growth_lp(
    p: &TransitionMatrix,
    budget: &RobustBudget,
    growth: &GrowthModel,
) -> Result<RobustProgram> {
    check_budget(p, budget)?;
    let n = p.len();
    let m = growth.m;
    let mut b = Builder::new();
    let x1 = b.block("x", n, |_| 0.0, false);
    let x2 = b.block("y", m, |_| 0.0, false);
    let s = b.block("s", n, |_| 1.0, false);
    let t = b.block("t", 1, |_| budget.eps1, false);
    let r = b.block("r", n, |j| budget.eps_col[j], false);
    let mu = b.block("mu", n, |_| 0.0, true);
    let growth_blocks = if m > 0 {
        let caps = growth.caps();
        let t2 = b.block("t_new", 1, |_| growth.scale(), false);
        let r2 = b.block("r_new", m, |j| caps[j], false);
        let mu2 = b.block("mu_new", m, |_| 0.0, true);
        Some((t2, r2, mu2))
    } else {
        None
    };
    let mut lp = b.finish();
    add_residual_rows(&mut lp, p, x1, s)?;
    add_decomposition_rows(&mut lp, n, x1, t, r, mu)?;
    if let Some((t2, r2, mu2)) = growth_blocks {
        add_decomposition_rows(&mut lp, m, x2, t2, r2, mu2)?;
    }
    let simplex: Vec<(usize, f64)> = (0..n + m).map(|j| (x1 + j, 1.0)).collect();
    lp.add_sparse(&simplex, Relation::Eq, 1.0)?;
    Ok(RobustProgram { lp, n, m })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RobustRankResult {
    #[serde(skip)]
    pub x1: RankVector,
    /// Mass on future sentences; always zero.
    pub x2: Vec<f64>,
    pub objective: f64,
    pub reported: ReportedRanks,
}

/// `‖Px − x‖₁ + ε₁‖x‖₍ₐ₎`, with the norm term evaluated through its support function.
pub fn robust_objective(p: &TransitionMatrix, budget: &RobustBudget, x: &[f64]) -> Result<f64> {
    check_budget(p, budget)?;
    Ok(eigen_residual(p, x) + box_l1_support(x, &budget.as_box())?.value)
}

/// Solves the robust ranking LP and reports max-one normalized ranks.
pub fn solve_robust(
    p: &TransitionMatrix,
    budget: &RobustBudget,
    ids: &[String],
) -> Result<RobustRankResult> {
    if ids.len() != p.len() {
        return Err(Error::Model(format!(
            "{} ids for {} sentences",
            ids.len(),
            p.len()
        )));
    }
    let program = assemble_robust_lp(p, budget)?;
    let sol = program.lp.solve()?.into_optimal()?;
    let x1 = RankVector::from_nonnegative(sol.x[program.x1_range()].to_vec())?;
    let reported = ReportedRanks::new(ids, x1.values())?;
    Ok(RobustRankResult {
        x1,
        x2: Vec::new(),
        objective: sol.objective_value,
        reported,
    })
}

/// Optimum of the growth-aware model, split into its two blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct GrowthSolution {
    pub x1: Vec<f64>,
    pub x2: Vec<f64>,
    pub objective: f64,
}

pub fn solve_growth(
    p: &TransitionMatrix,
    budget: &RobustBudget,
    growth: &GrowthModel,
) -> Result<GrowthSolution> {
    let program = assemble_growth_lp(p, budget, growth)?;
    let sol = program.lp.solve()?.into_optimal()?;
    Ok(GrowthSolution {
        x1: sol.x[program.x1_range()].to_vec(),
        x2: sol.x[program.x2_range()].to_vec(),
        objective: sol.objective_value,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparativeResult {
    /// LP solution: 1 on verified sentences, `[0, 1]` on generated ones.
    pub raw: Vec<f64>,
    /// `raw / Σ raw`, a feasible point of the robust ranking LP.
    pub normalized: Vec<f64>,
    pub objective: f64,
    pub reported: ReportedRanks,
}

/// Scores generated sentences against verified ones: the robust ranking LP
/// with the simplex constraint replaced by `x_i = 1` on the first
/// `n_verified` coordinates and `0 ≤ x_i ≤ 1` on the rest.
pub fn comparative_rank(
    p: &TransitionMatrix,
    n_verified: usize,
    budget: &RobustBudget,
    ids: &[String],
) -> Result<ComparativeResult> {
    let n = p.len();
    if n_verified == 0 || n_verified > n {
        return Err(Error::Parameter(format!(
            "n_verified = {n_verified} must lie in 1..={n}"
        )));
    }
    if ids.len() != n {
        return Err(Error::Model(format!("{} ids for {n} sentences", ids.len())));
    }
    check_budget(p, budget)?;
    let mut b = Builder::new();
    let x = b.block("x", n, |_| 0.0, false);
    let s = b.block("s", n, |_| 1.0, false);
    let t = b.block("t", 1, |_| budget.eps1, false);
    let r = b.block("r", n, |j| budget.eps_col[j], false);
    let mu = b.block("mu", n, |_| 0.0, true);
    let mut lp = b.finish();
    for i in 0..n {
        if i < n_verified {
            lp.set_bounds(x + i, 1.0, 1.0);
        } else {
            lp.set_bounds(x + i, 0.0, 1.0);
        }
    }
    add_residual_rows(&mut lp, p, x, s)?;
    add_decomposition_rows(&mut lp, n, x, t, r, mu)?;
    let sol = lp.solve()?.into_optimal()?;
    let raw: Vec<f64> = sol.x[x..x + n].iter().map(|v| v.clamp(0.0, 1.0)).collect();
    let total: f64 = raw.iter().sum();
    let normalized: Vec<f64> = raw.iter().map(|v| v / total).collect();
    let reported = ReportedRanks::new(ids, &normalized)?;
    Ok(ComparativeResult {
        raw,
        normalized,
        objective: sol.objective_value,
        reported,
    })
}

/// Upper bound on `max_Q ‖Qx − x‖₁` over grown perturbed matrices:
///
/// ```text
/// ‖Px⁽¹⁾ − x⁽¹⁾‖₁ + ε₁‖x⁽¹⁾‖₍ₐ₎ + (ε⁽ᶻ⁾+ε⁽ᵡ⁾+M)‖x⁽²⁾‖₍ᵦ₎
/// ```
///
/// Both norm terms are evaluated as support functions of their budgeted boxes.
pub fn worst_case_upper_bound(
    x: &[f64],
    p: &TransitionMatrix,
    budget: &RobustBudget,
    growth: &GrowthModel,
) -> Result<f64> {
    let n = p.len();
    if x.len() != n + growth.m {
        return Err(Error::Model(format!(
            "vector has {} entries, expected N + M = {}",
            x.len(),
            n + growth.m
        )));
    }
    let (x1, x2) = x.split_at(n);
    let existing = robust_objective(p, budget, x1)?;
    let future = if growth.m == 0 {
        0.0
    } else {
        let new_box = BudgetedBox {
            eps_total: growth.scale(),
            eps_col: growth.caps(),
        };
        box_l1_support(x2, &new_box)?.value
    };
    Ok(existing + future)
}

pub fn default_ids(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("s{i}")).collect()
}
