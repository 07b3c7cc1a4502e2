//! Support functions of budgeted boxes and the decomposition norms they induce.
//!
//! For a box `|z_j| ≤ ε_j` intersected with an l1 ball `‖z‖₁ ≤ ε`,
//!
//! ```text
//! max zᵀx  =  min_{λ+μ=x}  ε‖λ‖_∞ + Σ ε_j |μ_j|
//! ```
//!
//! and with an l2 ball the `‖λ‖_∞` term becomes `‖λ‖₂`. The left side is
//! computed directly (greedy allocation or bisection), the right side by
//! optimization, so the two routes check each other.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::lp::{LinearProgram, Relation};

#[derive(Debug, Clone, PartialEq)]
pub struct BudgetedBox {
    pub eps_total: f64,
    pub eps_col: Vec<f64>,
}

impl BudgetedBox {
    pub fn new(eps_total: f64, eps_col: Vec<f64>) -> Result<Self> {
        if !eps_total.is_finite() || eps_total < 0.0 {
            return Err(Error::Parameter(format!(
                "total budget {eps_total} must be finite and >= 0"
            )));
        }
        if let Some(bad) = eps_col.iter().find(|e| !e.is_finite() || **e < 0.0) {
            return Err(Error::Parameter(format!(
                "per-coordinate budget {bad} must be finite and >= 0"
            )));
        }
        Ok(Self { eps_total, eps_col })
    }

    /// Same cap on every coordinate.
    pub fn uniform(eps_total: f64, eps_each: f64, n: usize) -> Result<Self> {
        Self::new(eps_total, vec![eps_each; n])
    }

    pub fn len(&self) -> usize {
        self.eps_col.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eps_col.is_empty()
    }

    fn check_dim(&self, n: usize) -> Result<()> {
        if self.eps_col.len() != n {
            return Err(Error::Model(format!(
                "budget has {} coordinates, vector has {n}",
                self.eps_col.len()
            )));
        }
        Ok(())
    }
}

/// A maximizer `z` of `zᵀx` over a budgeted box, with the attained value.
#[derive(Debug, Clone, PartialEq)]
pub struct DualCertificate {
    pub z: Vec<f64>,
    pub value: f64,
}

/// A split `x = λ + μ` attaining a decomposition norm.
#[derive(Debug, Clone, PartialEq)]
pub struct NormDecomposition {
    pub lambda: Vec<f64>,
    pub mu: Vec<f64>,
    pub value: f64,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `max zᵀx` over `‖z‖₁ ≤ ε`, `|z_j| ≤ ε_j`.
///
/// Coordinates are filled greedily by decreasing `|x_j|` (lower index first
/// on ties), each taking `min(ε_j, remaining budget)`.
pub fn box_l1_support(x: &[f64], budget: &BudgetedBox) -> Result<DualCertificate> {
    budget.check_dim(x.len())?;
    let mut order: Vec<usize> = (0..x.len()).collect();
    order.sort_by(|&a, &b| x[b].abs().total_cmp(&x[a].abs()).then(a.cmp(&b)));
    let mut z = vec![0.0; x.len()];
    let mut remaining = budget.eps_total;
    for j in order {
        if remaining <= 0.0 || x[j] == 0.0 {
            continue;
        }
        let take = budget.eps_col[j].min(remaining);
        z[j] = take * x[j].signum();
        remaining -= take;
    }
    let value = dot(&z, x);
    Ok(DualCertificate { z, value })
}

/// `min outer·‖λ‖_∞ + Σ w_j |μ_j|` over `λ + μ = x`, as a linear program.
fn decomposition_lp(x: &[f64], outer: f64, weights: &[f64]) -> Result<NormDecomposition> {
    let n = x.len();
    if n == 0 {
        return Ok(NormDecomposition {
            lambda: vec![],
            mu: vec![],
            value: 0.0,
        });
    }
    // layout: λ (n, free) | μ (n, free) | t | r (n)
    let lam = |j: usize| j;
    let mu = |j: usize| n + j;
    let t = 2 * n;
    let r = |j: usize| 2 * n + 1 + j;
    let mut objective = vec![0.0; 3 * n + 1];
    objective[t] = outer;
    for j in 0..n {
        objective[r(j)] = weights[j];
    }
    let mut lp = LinearProgram::new(objective);
    for j in 0..n {
        lp.set_free(lam(j)).set_free(mu(j));
        lp.add_sparse(&[(lam(j), 1.0), (mu(j), 1.0)], Relation::Eq, x[j])?;
        lp.add_sparse(&[(lam(j), 1.0), (t, -1.0)], Relation::Le, 0.0)?;
        lp.add_sparse(&[(lam(j), -1.0), (t, -1.0)], Relation::Le, 0.0)?;
        lp.add_sparse(&[(mu(j), 1.0), (r(j), -1.0)], Relation::Le, 0.0)?;
        lp.add_sparse(&[(mu(j), -1.0), (r(j), -1.0)], Relation::Le, 0.0)?;
    }
    let sol = lp.solve()?.into_optimal()?;
    Ok(NormDecomposition {
        lambda: sol.x[..n].to_vec(),
        mu: sol.x[n..2 * n].to_vec(),
        value: sol.objective_value,
    })
}

/// `‖x‖₍ₐ₎ = min_{λ+μ=x} ‖λ‖_∞ + Σ (ε_j/ε)|μ_j|`, so that
/// `ε·‖x‖₍ₐ₎ = box_l1_support(x).value`.
pub fn norm_a(x: &[f64], budget: &BudgetedBox) -> Result<NormDecomposition> {
    budget.check_dim(x.len())?;
    if budget.eps_total <= 0.0 {
        return Err(Error::DegenerateBudget(
            "the decomposition norm needs a positive total budget".into(),
        ));
    }
    let weights: Vec<f64> = budget
        .eps_col
        .iter()
        .map(|e| e / budget.eps_total)
        .collect();
    decomposition_lp(x, 1.0, &weights)
}

/// `‖y‖₍ᵦ₎ = min_{λ+μ=y} ‖λ‖_∞ + Σ c_j|μ_j|`.
pub fn norm_b_value(y: &[f64], weights: &[f64]) -> Result<NormDecomposition> {
    if y.len() != weights.len() {
        return Err(Error::Model(format!(
            "{} weights for a vector of length {}",
            weights.len(),
            y.len()
        )));
    }
    if let Some(bad) = weights.iter().find(|c| !c.is_finite() || **c < 0.0) {
        return Err(Error::Parameter(format!(
            "weight {bad} must be finite and >= 0"
        )));
    }
    decomposition_lp(y, 1.0, weights)
}

/// Closed-form `min_{y ∈ Σ_M} ‖y‖₍ᵦ₎`: `1/M` when every `c_j ≥ 1/M`, else `min_j c_j`.
/// With no coordinates the norm is zero.
pub fn norm_b_simplex_min(m: usize, weights: &[f64]) -> Result<f64> {
    if weights.len() != m {
        return Err(Error::Model(format!(
            "{} weights for M = {m}",
            weights.len()
        )));
    }
    if let Some(bad) = weights.iter().find(|c| !c.is_finite() || **c < 0.0) {
        return Err(Error::Parameter(format!(
            "weight {bad} must be finite and >= 0"
        )));
    }
    if m == 0 {
        return Ok(0.0);
    }
    let inv = 1.0 / m as f64;
    let min_c = weights.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(if min_c >= inv { inv } else { min_c })
}

/// The same minimum by a direct linear program over `y ∈ Σ_M` and `λ + μ = y`.
pub fn norm_b_simplex_min_lp(m: usize, weights: &[f64]) -> Result<f64> {
    if weights.len() != m {
        return Err(Error::Model(format!(
            "{} weights for M = {m}",
            weights.len()
        )));
    }
    if m == 0 {
        return Ok(0.0);
    }
    // layout: y (m) | λ (m, free) | μ (m, free) | u | v (m)
    let y = |j: usize| j;
    let lam = |j: usize| m + j;
    let mu = |j: usize| 2 * m + j;
    let u = 3 * m;
    let v = |j: usize| 3 * m + 1 + j;
    let mut objective = vec![0.0; 4 * m + 1];
    objective[u] = 1.0;
    for j in 0..m {
        objective[v(j)] = weights[j];
    }
    let mut lp = LinearProgram::new(objective);
    let all_y: Vec<(usize, f64)> = (0..m).map(|j| (y(j), 1.0)).collect();
    lp.add_sparse(&all_y, Relation::Eq, 1.0)?;
    for j in 0..m {
        lp.set_free(lam(j)).set_free(mu(j));
        lp.add_sparse(
            &[(lam(j), 1.0), (mu(j), 1.0), (y(j), -1.0)],
            Relation::Eq,
            0.0,
        )?;
        lp.add_sparse(&[(lam(j), 1.0), (u, -1.0)], Relation::Le, 0.0)?;
        lp.add_sparse(&[(lam(j), -1.0), (u, -1.0)], Relation::Le, 0.0)?;
        lp.add_sparse(&[(mu(j), 1.0), (v(j), -1.0)], Relation::Le, 0.0)?;
        lp.add_sparse(&[(mu(j), -1.0), (v(j), -1.0)], Relation::Le, 0.0)?;
    }
    Ok(lp.solve()?.into_optimal()?.objective_value)
}

/// Bisection tolerance on the scaling `κ`.
const KAPPA_TOL: f64 = 1e-12;

/// `max zᵀx` over `‖z‖₂ ≤ ε`, `|z_j| ≤ ε_j`.
///
/// The maximizer has the form `z_j = sign(x_j)·min(ε_j, κ|x_j|)`; `κ` is
/// found by bisection on `‖z(κ)‖₂ = ε`, or is infinite when the fully
/// clamped point already lies inside the ball.
pub fn box_l2_support(x: &[f64], budget: &BudgetedBox) -> Result<DualCertificate> {
    budget.check_dim(x.len())?;
    let eps = budget.eps_total;
    let z_at = |kappa: f64| -> Vec<f64> {
        x.iter()
            .zip(&budget.eps_col)
            .map(|(&xj, &cap)| {
                if xj == 0.0 {
                    0.0
                } else if kappa.is_infinite() {
                    cap * xj.signum()
                } else {
                    (kappa * xj.abs()).min(cap) * xj.signum()
                }
            })
            .collect()
    };
    let norm = |z: &[f64]| z.iter().map(|v| v * v).sum::<f64>().sqrt();

    let clamped = z_at(f64::INFINITY);
    if norm(&clamped) <= eps {
        let value = dot(&clamped, x);
        return Ok(DualCertificate { z: clamped, value });
    }

    let mut lo = 0.0;
    let mut hi = x
        .iter()
        .zip(&budget.eps_col)
        .filter(|(xj, _)| **xj != 0.0)
        .map(|(xj, cap)| cap / xj.abs())
        .fold(0.0, f64::max);
    for _ in 0..400 {
        if hi - lo <= KAPPA_TOL * hi.max(1.0) {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if norm(&z_at(mid)) <= eps {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // Solve exactly for κ given the clamped set found by bisection.
    let mut kappa = lo;
    let mid = 0.5 * (lo + hi);
    let (mut clamped_sq, mut free_sq) = (0.0, 0.0);
    for (&xj, &cap) in x.iter().zip(&budget.eps_col) {
        if xj == 0.0 {
            continue;
        }
        if mid * xj.abs() >= cap {
            clamped_sq += cap * cap;
        } else {
            free_sq += xj * xj;
        }
    }
    if free_sq > 0.0 && eps * eps >= clamped_sq {
        let exact = ((eps * eps - clamped_sq) / free_sq).sqrt();
        let z = z_at(exact);
        if (norm(&z) - eps).abs() <= 1e-12 * eps.max(1.0) {
            kappa = exact;
        }
    }
    let z = z_at(kappa);
    let value = dot(&z, x);
    Ok(DualCertificate { z, value })
}

/// Result of the primal l2 decomposition search.
#[derive(Debug, Clone, PartialEq)]
pub struct L2Decomposition {
    pub lambda: Vec<f64>,
    pub mu: Vec<f64>,
    pub value: f64,
    /// Gap between the primal value and the dual point built from `λ`.
    pub gap: f64,
    pub sweeps: usize,
}

/// Minimizes `ε‖λ‖₂ + Σ ε_j|μ_j|` over `λ + μ = x` by exact coordinate descent
/// on `μ`. Stops once a dual point derived from `λ` certifies a gap below `1e-10`.
pub fn l2_decomposition(x: &[f64], budget: &BudgetedBox) -> Result<L2Decomposition> {
    budget.check_dim(x.len())?;
    let eps = budget.eps_total;
    if eps <= 0.0 {
        return Err(Error::DegenerateBudget(
            "the l2 decomposition needs a positive total budget".into(),
        ));
    }
    let n = x.len();
    let caps = &budget.eps_col;
    let objective = |mu: &[f64]| -> f64 {
        let lam_sq: f64 = x.iter().zip(mu).map(|(a, m)| (a - m) * (a - m)).sum();
        eps * lam_sq.sqrt() + mu.iter().zip(caps).map(|(m, c)| c * m.abs()).sum::<f64>()
    };
    // z_j = clip(ε λ_j / ‖λ‖, ±ε_j) is feasible for the support problem, so zᵀx
    // lower-bounds the minimum.
    let dual_bound = |mu: &[f64]| -> f64 {
        let lam: Vec<f64> = x.iter().zip(mu).map(|(a, m)| a - m).collect();
        let norm = lam.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 {
            // λ = 0: the box-only point is feasible iff it lies in the ball
            let z: Vec<f64> = x.iter().zip(caps).map(|(a, c)| c * a.signum()).collect();
            let zn = z.iter().map(|v| v * v).sum::<f64>().sqrt();
            let scale = if zn > eps { eps / zn } else { 1.0 };
            return dot(&z, x) * scale;
        }
        lam.iter()
            .zip(caps)
            .zip(x)
            .map(|((l, c), a)| (eps * l / norm).clamp(-c, *c) * a)
            .sum()
    };

    let mut mu = vec![0.0; n];
    let tol = 1e-10;
    let max_sweeps = 200_000;
    let mut value = objective(&mu);
    let mut gap = value - dual_bound(&mu);
    let mut sweeps = 0;
    while gap > tol * (1.0 + value.abs()) && sweeps < max_sweeps {
        for j in 0..n {
            let a = x[j];
            let rest: f64 = (0..n)
                .filter(|&k| k != j)
                .map(|k| (x[k] - mu[k]).powi(2))
                .sum();
            let rho = caps[j] / eps;
            mu[j] = if rest == 0.0 {
                // ε|a - μ| + ε_j|μ|: all on the cheaper side
                if caps[j] < eps {
                    a
                } else {
                    0.0
                }
            } else if rho >= 1.0 || eps * a.abs() / (rest + a * a).sqrt() <= caps[j] {
                0.0
            } else {
                // stationarity: |a - μ| / sqrt(rest + (a - μ)²) = ρ
                let d = (rest * rho * rho / (1.0 - rho * rho)).sqrt();
                a - d * a.signum()
            };
        }
        sweeps += 1;
        value = objective(&mu);
        gap = value - dual_bound(&mu);
    }
    if gap > 1e-8 * (1.0 + value.abs()) {
        return Err(Error::Numeric {
            what: format!("l2 decomposition did not converge in {sweeps} sweeps"),
            gap,
        });
    }
    Ok(L2Decomposition {
        lambda: x.iter().zip(&mu).map(|(a, m)| a - m).collect(),
        mu,
        value,
        gap,
        sweeps,
    })
}

/// Evaluates the l2 decomposition and checks it against [`box_l2_support`]
/// within `1e-6`.
pub fn norm_a_l2_check(x: &[f64], budget: &BudgetedBox) -> Result<f64> {
    let primal = l2_decomposition(x, budget)?;
    let dual = box_l2_support(x, budget)?;
    let gap = (primal.value - dual.value).abs();
    if gap > 1e-6 {
        return Err(Error::Numeric {
            what: "l2 decomposition disagrees with the support function".into(),
            gap,
        });
    }
    Ok(primal.value)
}

/// Worst case of `‖a₀ + Σ ξᵢaᵢ‖₂` over `‖ξᵢ‖_F ≤ εᵢ`.
#[derive(Debug, Clone, PartialEq)]
pub struct FrobeniusWorstCase {
    pub value: f64,
    /// `ξᵢ* = εᵢ a₀ aᵢᵀ / (‖a₀‖₂‖aᵢ‖₂)`; zero where `aᵢ = 0`.
    pub maximizers: Vec<DMatrix<f64>>,
    /// `‖a₀ + Σ ξᵢ*aᵢ‖₂`.
    pub attained: f64,
}

/// Closed form `‖a₀‖₂ + Σ εᵢ‖aᵢ‖₂` together with its maximizers.
///
/// When `a₀ = 0` the first basis vector stands in for its direction.
pub fn frobenius_worst_case(
    a0: &DVector<f64>,
    ai: &[DVector<f64>],
    eps: &[f64],
) -> Result<FrobeniusWorstCase> {
    if ai.len() != eps.len() {
        return Err(Error::Model(format!(
            "{} blocks but {} budgets",
            ai.len(),
            eps.len()
        )));
    }
    if let Some(bad) = eps.iter().find(|e| !e.is_finite() || **e < 0.0) {
        return Err(Error::Parameter(format!(
            "block budget {bad} must be finite and >= 0"
        )));
    }
    if a0.is_empty() {
        return Err(Error::Model("a0 must have at least one coordinate".into()));
    }
    let a0_norm = a0.norm();
    let direction = if a0_norm > 0.0 {
        a0 / a0_norm
    } else {
        let mut e = DVector::zeros(a0.len());
        e[0] = 1.0;
        e
    };
    let value = a0_norm + ai.iter().zip(eps).map(|(a, e)| e * a.norm()).sum::<f64>();
    let maximizers: Vec<DMatrix<f64>> = ai
        .iter()
        .zip(eps)
        .map(|(a, &e)| {
            let an = a.norm();
            if an == 0.0 {
                DMatrix::zeros(a0.len(), a.len())
            } else {
                &direction * a.transpose() * (e / an)
            }
        })
        .collect();
    let mut image = a0.clone();
    for (xi, a) in maximizers.iter().zip(ai) {
        image += xi * a;
    }
    let attained = image.norm();
    if (attained - value).abs() > 1e-9 * value.max(1.0) {
        return Err(Error::Numeric {
            what: "maximizer does not attain the closed-form worst case".into(),
            gap: (attained - value).abs(),
        });
    }
    Ok(FrobeniusWorstCase {
        value,
        maximizers,
        attained,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::dvector;
    use proptest::prelude::*;

    fn bx(eps: f64, caps: &[f64]) -> BudgetedBox {
        BudgetedBox::new(eps, caps.to_vec()).unwrap()
    }

    #[test]
    fn l1_support_examples() {
        let c = box_l1_support(&[3.0, 1.0], &bx(1.5, &[1.0, 1.0])).unwrap();
        assert_eq!(c.z, vec![1.0, 0.5]);
        assert_eq!(c.value, 3.5);
        assert_eq!(
            box_l1_support(&[0.0, 0.0], &bx(1.5, &[1.0, 1.0]))
                .unwrap()
                .value,
            0.0
        );
        assert_eq!(
            box_l1_support(&[1.0, 2.0], &bx(10.0, &[1.0, 1.0]))
                .unwrap()
                .value,
            3.0
        );
    }

    #[test]
    fn l1_support_ties_go_to_lower_index() {
        let c = box_l1_support(&[2.0, -2.0], &bx(1.0, &[1.0, 1.0])).unwrap();
        assert_eq!(c.z, vec![1.0, 0.0]);
    }

    #[test]
    fn zero_cap_gives_zero_coordinate() {
        let c = box_l1_support(&[5.0, 1.0], &bx(3.0, &[0.0, 2.0])).unwrap();
        assert_eq!(c.z, vec![0.0, 2.0]);
    }

    #[test]
    fn norm_a_examples() {
        let d = norm_a(&[3.0, 1.0], &bx(1.5, &[1.0, 1.0])).unwrap();
        assert!((d.value - 7.0 / 3.0).abs() < 1e-12);

        let d = norm_a(&[1.0, 0.0, 0.0], &bx(0.5, &[1.0, 1.0, 1.0])).unwrap();
        assert!((d.value - 1.0).abs() < 1e-12);
        assert!((d.lambda[0] - 1.0).abs() < 1e-12);
        assert!(d.mu.iter().all(|m| m.abs() < 1e-12));

        let d = norm_a(&[0.0, 0.0], &bx(1.0, &[1.0, 1.0])).unwrap();
        assert_eq!(d.value, 0.0);
        assert!(d.lambda.iter().chain(&d.mu).all(|v| v.abs() < 1e-15));
    }

    #[test]
    fn norm_a_rejects_zero_budget() {
        assert!(matches!(
            norm_a(&[1.0], &bx(0.0, &[1.0])),
            Err(Error::DegenerateBudget(_))
        ));
    }

    #[test]
    fn dimension_mismatch() {
        assert!(matches!(
            box_l1_support(&[1.0], &bx(1.0, &[1.0, 1.0])),
            Err(Error::Model(_))
        ));
        assert!(BudgetedBox::new(-1.0, vec![]).is_err());
        assert!(BudgetedBox::new(1.0, vec![f64::NAN]).is_err());
    }

    #[test]
    fn l2_support_examples() {
        let c = box_l2_support(&[1.0, 0.0], &bx(0.5, &[2.0, 2.0])).unwrap();
        assert!((c.value - 0.5).abs() < 1e-12);
        assert!((c.z[0] - 0.5).abs() < 1e-12 && c.z[1] == 0.0);
        let c = box_l2_support(&[1.0, 1.0], &bx(10.0, &[1.0, 1.0])).unwrap();
        assert_eq!(c.value, 2.0);
    }

    #[test]
    fn l2_support_mixed_clamping() {
        // caps (0.1, 5): first coordinate clamps, second takes the rest of the ball
        let c = box_l2_support(&[1.0, 1.0], &bx(1.0, &[0.1, 5.0])).unwrap();
        let expected = 0.1 + (1.0f64 - 0.01).sqrt();
        assert!((c.value - expected).abs() < 1e-12);
    }

    #[test]
    fn l2_check_examples() {
        assert_eq!(
            norm_a_l2_check(&[0.0, 0.0], &bx(1.0, &[1.0, 1.0])).unwrap(),
            0.0
        );
        let v = norm_a_l2_check(&[1.0, 0.0], &bx(0.5, &[2.0, 2.0])).unwrap();
        assert!((v - 0.5).abs() < 1e-9);
    }

    #[test]
    fn frobenius_examples() {
        let w = frobenius_worst_case(&dvector![1.0, 0.0], &[dvector![0.0, 3.0]], &[2.0]).unwrap();
        assert_eq!(w.value, 7.0);
        assert!((w.attained - 7.0).abs() < 1e-12);
        let w = frobenius_worst_case(&dvector![3.0, 4.0], &[], &[]).unwrap();
        assert_eq!(w.value, 5.0);
        let w = frobenius_worst_case(
            &dvector![0.0, 0.0],
            &[dvector![1.0], dvector![0.0, 2.0]],
            &[1.0, 0.5],
        )
        .unwrap();
        assert!((w.value - 2.0).abs() < 1e-12);
        assert!(frobenius_worst_case(&dvector![1.0], &[dvector![1.0]], &[-1.0]).is_err());
    }

    #[test]
    fn norm_b_examples() {
        assert!(
            (norm_b_value(&[1.0, 0.0, 0.0], &[1.0, 1.0, 1.0])
                .unwrap()
                .value
                - 1.0)
                .abs()
                < 1e-12
        );
        let third = 1.0 / 3.0;
        let v = norm_b_value(&[third; 3], &[third; 3]).unwrap().value;
        assert!((v - third).abs() < 1e-12);
        assert_eq!(norm_b_value(&[0.0, 0.0], &[1.0, 1.0]).unwrap().value, 0.0);
    }

    #[test]
    fn norm_b_simplex_examples() {
        assert_eq!(norm_b_simplex_min(3, &[1.0 / 3.0; 3]).unwrap(), 1.0 / 3.0);
        assert_eq!(norm_b_simplex_min(3, &[0.2, 0.5, 0.6]).unwrap(), 0.2);
        assert_eq!(norm_b_simplex_min(1, &[1.5]).unwrap(), 1.0);
        assert_eq!(norm_b_simplex_min(0, &[]).unwrap(), 0.0);
        assert!(norm_b_simplex_min(2, &[1.0]).is_err());
        let lp = norm_b_simplex_min_lp(3, &[0.2, 0.5, 0.6]).unwrap();
        assert!((lp - 0.2).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn l1_support_homogeneous_and_monotone(
            x in prop::collection::vec(-5.0f64..5.0, 1..8),
            eps in 0.0f64..3.0,
            caps in prop::collection::vec(0.0f64..3.0, 8),
            scale in 0.0f64..4.0,
            bump in 0.0f64..1.0,
            which in 0usize..8,
        ) {
            let n = x.len();
            let b = bx(eps, &caps[..n]);
            let base = box_l1_support(&x, &b).unwrap().value;
            let scaled: Vec<f64> = x.iter().map(|v| v * scale).collect();
            let sv = box_l1_support(&scaled, &b).unwrap().value;
            prop_assert!((sv - scale * base).abs() <= 1e-9 * (1.0 + sv.abs()));

            let bigger_total = bx(eps + bump, &caps[..n]);
            prop_assert!(box_l1_support(&x, &bigger_total).unwrap().value >= base - 1e-12);
            let mut caps2 = caps[..n].to_vec();
            caps2[which % n] += bump;
            prop_assert!(box_l1_support(&x, &bx(eps, &caps2)).unwrap().value >= base - 1e-12);
        }

        #[test]
        fn l1_certificate_is_feasible(
            x in prop::collection::vec(-5.0f64..5.0, 1..8),
            eps in 0.0f64..3.0,
            caps in prop::collection::vec(0.0f64..3.0, 8),
        ) {
            let n = x.len();
            let c = box_l1_support(&x, &bx(eps, &caps[..n])).unwrap();
            prop_assert!(c.z.iter().map(|v| v.abs()).sum::<f64>() <= eps + 1e-9);
            for j in 0..n {
                prop_assert!(c.z[j].abs() <= caps[j] + 1e-9);
                if caps[j] == 0.0 { prop_assert_eq!(c.z[j], 0.0); }
            }
            prop_assert!((dot(&c.z, &x) - c.value).abs() <= 1e-12);
        }

        #[test]
        fn l2_certificate_is_feasible(
            x in prop::collection::vec(-5.0f64..5.0, 1..8),
            eps in 0.0f64..3.0,
            caps in prop::collection::vec(0.0f64..3.0, 8),
        ) {
            let n = x.len();
            let c = box_l2_support(&x, &bx(eps, &caps[..n])).unwrap();
            prop_assert!(c.z.iter().map(|v| v * v).sum::<f64>().sqrt() <= eps + 1e-9);
            for j in 0..n {
                prop_assert!(c.z[j].abs() <= caps[j] + 1e-9);
            }
        }

        #[test]
        fn norm_a_split_reconstructs_x(
            x in prop::collection::vec(-5.0f64..5.0, 1..6),
            eps in 0.1f64..3.0,
            caps in prop::collection::vec(0.0f64..3.0, 6),
        ) {
            let n = x.len();
            let d = norm_a(&x, &bx(eps, &caps[..n])).unwrap();
            for j in 0..n {
                prop_assert!((d.lambda[j] + d.mu[j] - x[j]).abs() <= 1e-9);
            }
            let linf = d.lambda.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            let weighted: f64 = d.mu.iter().zip(&caps[..n]).map(|(m, c)| c / eps * m.abs()).sum();
            prop_assert!((linf + weighted - d.value).abs() <= 1e-9);
        }
    }
}
