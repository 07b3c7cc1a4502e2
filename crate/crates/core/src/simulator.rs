//! Monte Carlo checks of the worst-case bounds.
//!
//! A grown, perturbed matrix has the block form
//!
//! ```text
//! Q = ⎡ P + ξ   ζ ⎤   ξ: N×N, ζ: N×M
//!     ⎣   ψ     χ ⎦   ψ: M×N, χ: M×M
//! ```
//!
//! with `ξ ≥ −P`, `ψ, ζ, χ ≥ 0`, unit column sums and l1 budgets per column
//! and per block. The sampler below builds feasible members constructively;
//! it is not uniform over the set, which the bounds do not require.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::TransitionMatrix;
use crate::robust::{worst_case_upper_bound, GrowthModel, RobustBudget};

/// Absolute slack allowed between a sampled residual and its bound.
pub const VIOLATION_TOL: f64 = 1e-9;

/// l1 budget of one perturbation block: a total and one cap per column.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockBudget {
    pub total: f64,
    pub col: Vec<f64>,
}

impl BlockBudget {
    pub fn new(total: f64, col: Vec<f64>) -> Result<Self> {
        let all = std::iter::once(total).chain(col.iter().copied());
        for v in all {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::SetDefinition(format!(
                    "block budget {v} must be finite and >= 0"
                )));
            }
        }
        Ok(Self { total, col })
    }

    pub fn uniform(total: f64, each: f64, n: usize) -> Result<Self> {
        Self::new(total, vec![each; n])
    }

    pub fn zero(n: usize) -> Self {
        Self {
            total: 0.0,
            col: vec![0.0; n],
        }
    }
}

/// Budgets for all four blocks. `ζ` and `χ` live in the growth model.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationBudgets {
    pub xi: BlockBudget,
    pub psi: BlockBudget,
    pub growth: GrowthModel,
}

impl SimulationBudgets {
    pub fn new(xi: BlockBudget, psi: BlockBudget, growth: GrowthModel) -> Result<Self> {
        if xi.col.len() != psi.col.len() {
            return Err(Error::SetDefinition(format!(
                "xi has {} column budgets, psi has {}",
                xi.col.len(),
                psi.col.len()
            )));
        }
        let g = &growth;
        let zeta_cols: f64 = g.eps_zeta_col.iter().sum();
        let chi_cols: f64 = g.eps_chi_col.iter().sum();
        // every new column carries exactly ε_j^ζ in ζ and ε_j^χ in χ, so the
        // block totals must cover the column caps
        let slack = 1e-12 * (1.0 + g.m as f64);
        if zeta_cols > g.eps_zeta_total + slack || chi_cols > g.eps_chi_total + slack {
            return Err(Error::SetDefinition(
                "zeta/chi block totals are smaller than the sum of their column budgets".into(),
            ));
        }
        Ok(Self { xi, psi, growth })
    }

    /// Same cap on every ξ and ψ column; `M` new columns split `zeta_share`/`1 − zeta_share`.
    pub fn uniform(
        n: usize,
        xi_total: f64,
        xi_col: f64,
        psi_total: f64,
        psi_col: f64,
        m: usize,
        zeta_share: f64,
    ) -> Result<Self> {
        Self::new(
            BlockBudget::uniform(xi_total, xi_col, n)?,
            BlockBudget::uniform(psi_total, psi_col, n)?,
            GrowthModel::uniform(m, zeta_share)?,
        )
    }

    pub fn n(&self) -> usize {
        self.xi.col.len()
    }

    pub fn m(&self) -> usize {
        self.growth.m
    }

    /// `ε₁ = ε⁽ᵟ⁾ + ε⁽ᵠ⁾` and `ε_j = ε_j⁽ᵟ⁾ + ε_j⁽ᵠ⁾`.
    pub fn robust_budget(&self) -> RobustBudget {
        RobustBudget {
            eps1: self.xi.total + self.psi.total,
            eps_col: self
                .xi
                .col
                .iter()
                .zip(&self.psi.col)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

/// One member of the grown uncertainty set.
#[derive(Debug, Clone, PartialEq)]
pub struct PerturbationSample {
    pub xi: DMatrix<f64>,
    pub psi: DMatrix<f64>,
    pub zeta: DMatrix<f64>,
    pub chi: DMatrix<f64>,
    pub q: DMatrix<f64>,
}

fn col_l1(m: &DMatrix<f64>, j: usize) -> f64 {
    m.column(j).iter().map(|v| v.abs()).sum()
}

/// Random point of the probability simplex of length `len`.
fn random_split(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
    let w: Vec<f64> = (0..len).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
    let s: f64 = w.iter().sum();
    w.into_iter().map(|v| v / s).collect()
}

/// Fraction in `[0, 1]`, pinned to 1 half the time so samples reach the budget caps.
fn draw_fraction(rng: &mut ChaCha8Rng) -> f64 {
    if rng.gen_bool(0.5) {
        1.0
    } else {
        rng.gen()
    }
}

/// Column of `ξ` that removes `remove` mass from `P`'s column proportionally
/// and adds `shuffle` of it back at one random row. Requires `remove ≤ 1`.
fn xi_column(
    rng: &mut ChaCha8Rng,
    p: &DMatrix<f64>,
    j: usize,
    remove: f64,
    shuffle: f64,
) -> DVector<f64> {
    let n = p.nrows();
    let mut col = DVector::from_fn(n, |i, _| -remove * p[(i, j)]);
    if shuffle > 0.0 {
        col[rng.gen_range(0..n)] += shuffle;
    }
    col
}

/// Seeded generator of perturbation samples.
pub struct PerturbationSampler<'a> {
    p: &'a TransitionMatrix,
    budgets: &'a SimulationBudgets,
    rng: ChaCha8Rng,
}

impl<'a> PerturbationSampler<'a> {
    pub fn new(p: &'a TransitionMatrix, budgets: &'a SimulationBudgets, seed: u64) -> Result<Self> {
        if budgets.n() != p.len() {
            return Err(Error::Model(format!(
                "budgets cover {} columns, transition matrix has {}",
                budgets.n(),
                p.len()
            )));
        }
        Ok(Self {
            p,
            budgets,
            rng: ChaCha8Rng::seed_from_u64(seed),
        })
    }

    /// Column `j ≤ N`: move `m_j ≤ min(ε_j⁽ᵟ⁾, ε_j⁽ᵠ⁾)/2` out of `P`'s column into
    /// `ψ`, and reshuffle up to the rest of the `ξ` cap inside the column.
    /// Columns `j ≤ M`: `ζ` carries exactly `ε_j⁽ᶻ⁾`, `χ` the complement.
    pub fn sample(&mut self) -> PerturbationSample {
        let p = self.p.values();
        let b = self.budgets;
        let (n, m) = (b.n(), b.m());
        let rng = &mut self.rng;

        let mut xi = DMatrix::zeros(n, n);
        let mut psi = DMatrix::zeros(m, n);
        for j in 0..n {
            let (cap_xi, cap_psi) = (b.xi.col[j], b.psi.col[j]);
            let outflow = if m == 0 {
                0.0
            } else {
                (draw_fraction(rng) * cap_xi.min(cap_psi) / 2.0).min(1.0)
            };
            let shuffle = (draw_fraction(rng) * (cap_xi - outflow) / 2.0)
                .min(1.0 - outflow)
                .max(0.0);
            xi.set_column(j, &xi_column(rng, p, j, outflow + shuffle, shuffle));
            if m > 0 && outflow > 0.0 {
                let split = random_split(rng, m);
                for (i, w) in split.into_iter().enumerate() {
                    psi[(i, j)] = outflow * w;
                }
            }
        }
        // one common factor keeps every column sum change at zero
        let xi_mass: f64 = (0..n).map(|j| col_l1(&xi, j)).sum();
        let psi_mass: f64 = (0..n).map(|j| col_l1(&psi, j)).sum();
        let mut scale: f64 = 1.0;
        if xi_mass > b.xi.total {
            scale = scale.min(b.xi.total / xi_mass);
        }
        if psi_mass > b.psi.total {
            scale = scale.min(b.psi.total / psi_mass);
        }
        if scale < 1.0 {
            xi *= scale;
            psi *= scale;
        }

        let g = &b.growth;
        let mut zeta = DMatrix::zeros(n, m);
        let mut chi = DMatrix::zeros(m, m);
        for j in 0..m {
            for (i, w) in random_split(rng, n).into_iter().enumerate() {
                zeta[(i, j)] = g.eps_zeta_col[j] * w;
            }
            for (i, w) in random_split(rng, m).into_iter().enumerate() {
                chi[(i, j)] = g.eps_chi_col[j] * w;
            }
        }

        let mut q = DMatrix::zeros(n + m, n + m);
        q.view_mut((0, 0), (n, n)).copy_from(&(p + &xi));
        q.view_mut((0, n), (n, m)).copy_from(&zeta);
        q.view_mut((n, 0), (m, n)).copy_from(&psi);
        q.view_mut((n, n), (m, m)).copy_from(&chi);
        // ξ ≥ −P holds exactly in real arithmetic; drop the rounding residue
        q.apply(|v| {
            if *v < 0.0 && *v > -1e-15 {
                *v = 0.0
            }
        });
        PerturbationSample {
            xi,
            psi,
            zeta,
            chi,
            q,
        }
    }
}

/// A single seeded sample.
pub fn sample_perturbation(
    p: &TransitionMatrix,
    budgets: &SimulationBudgets,
    seed: u64,
) -> Result<PerturbationSample> {
    Ok(PerturbationSampler::new(p, budgets, seed)?.sample())
}

/// `‖Qx − x‖₁`.
pub fn residual(q: &DMatrix<f64>, x: &[f64]) -> f64 {
    let xv = DVector::from_column_slice(x);
    (q * &xv - &xv).abs().sum()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationReport {
    pub samples: usize,
    pub max_residual: f64,
    pub bound_value: f64,
    pub violations: usize,
    pub seed: u64,
}

/// Largest sampled residual at `x ∈ Σ_{N+M}` against the worst-case upper bound.
pub fn empirical_phi1(
    p: &TransitionMatrix,
    x: &[f64],
    budgets: &SimulationBudgets,
    n_samples: usize,
    seed: u64,
) -> Result<SimulationReport> {
    if n_samples == 0 {
        return Err(Error::Parameter("need at least one sample".into()));
    }
    let bound = worst_case_upper_bound(x, p, &budgets.robust_budget(), &budgets.growth)?;
    let mut sampler = PerturbationSampler::new(p, budgets, seed)?;
    let mut max_residual: f64 = 0.0;
    let mut violations = 0;
    for _ in 0..n_samples {
        let r = residual(&sampler.sample().q, x);
        max_residual = max_residual.max(r);
        if r > bound + VIOLATION_TOL {
            violations += 1;
        }
    }
    Ok(SimulationReport {
        samples: n_samples,
        max_residual,
        bound_value: bound,
        violations,
        seed,
    })
}

/// Fixed-size perturbation `P + ξ` with zero column sums of `ξ`, built from
/// paired ± mass inside each column.
pub fn sample_fixed_size(
    rng: &mut ChaCha8Rng,
    p: &TransitionMatrix,
    xi: &BlockBudget,
) -> DMatrix<f64> {
    let pv = p.values();
    let n = p.len();
    let mut out = DMatrix::zeros(n, n);
    for j in 0..n {
        let shuffle = (draw_fraction(rng) * xi.col[j] / 2.0).min(1.0);
        out.set_column(j, &xi_column(rng, pv, j, shuffle, shuffle));
    }
    let mass: f64 = (0..n).map(|j| col_l1(&out, j)).sum();
    if mass > xi.total {
        out *= xi.total / mass;
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FixedSizeReport {
    pub samples: usize,
    pub max_fixed_residual: f64,
    /// Empirical maximum over the grown set, including the fixed-size samples
    /// embedded with `ψ = ζ = 0`.
    pub grown_max: f64,
    pub bound_value: f64,
    pub violations: usize,
    pub seed: u64,
}

impl FixedSizeReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

/// Samples fixed-size perturbations and checks each residual against the
/// grown-set empirical maximum and the worst-case upper bound.
///
/// The grown set uses the same `ξ` budget, an equal `ψ` budget and one new
/// sentence; the fixed-size samples embed into it as `ψ = ζ = 0`, `χ = 1`.
pub fn prop2_check(
    p: &TransitionMatrix,
    x1: &[f64],
    xi: &BlockBudget,
    n_samples: usize,
    seed: u64,
) -> Result<FixedSizeReport> {
    let n = p.len();
    if x1.len() != n || xi.col.len() != n {
        return Err(Error::Model(format!("expected vectors of length {n}")));
    }
    if x1.iter().any(|v| *v < 0.0) || (x1.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
        return Err(Error::Parameter("x1 must lie on the simplex".into()));
    }
    let fixed_budget = RobustBudget::new(xi.total, xi.col.clone())?;
    let bound = worst_case_upper_bound(x1, p, &fixed_budget, &GrowthModel::none())?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fixed: Vec<f64> = (0..n_samples)
        .map(|_| {
            let q = p.values() + sample_fixed_size(&mut rng, p, xi);
            residual(&q, x1)
        })
        .collect();
    let max_fixed = fixed.iter().copied().fold(0.0, f64::max);

    let grown_budgets =
        SimulationBudgets::new(xi.clone(), xi.clone(), GrowthModel::uniform(1, 0.0)?)?;
    let mut padded = x1.to_vec();
    padded.push(0.0);
    let grown = empirical_phi1(
        p,
        &padded,
        &grown_budgets,
        n_samples.max(1),
        seed.wrapping_add(1),
    )?;
    let grown_max = grown.max_residual.max(max_fixed);

    let violations = fixed
        .iter()
        .filter(|&&r| r > grown_max + VIOLATION_TOL || r > bound + VIOLATION_TOL)
        .count();
    Ok(FixedSizeReport {
        samples: n_samples,
        max_fixed_residual: max_fixed,
        grown_max,
        bound_value: bound,
        violations,
        seed,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridSearchReport {
    pub points: usize,
    pub max_residual: f64,
    pub bound_value: f64,
}

/// Exhaustive search over a grid of the 3×3 fixed-size perturbation polytope.
///
/// Each column of `ξ` has zero sum, so it is parametrized by its first two
/// entries on `steps × steps` grid points in `[−ε_j, ε_j]²`; infeasible
/// points (`ξ < −P`, over a column or total budget) are skipped.
pub fn grid_search_n3(
    p: &TransitionMatrix,
    x1: &[f64],
    xi: &BlockBudget,
    steps: usize,
) -> Result<GridSearchReport> {
    if p.len() != 3 || x1.len() != 3 || xi.col.len() != 3 {
        return Err(Error::Model("grid search is defined for N = 3 only".into()));
    }
    if steps < 2 {
        return Err(Error::Parameter(
            "grid needs at least two steps per axis".into(),
        ));
    }
    let pv = p.values();
    let tol = 1e-12;
    let column_options: Vec<Vec<([f64; 3], f64)>> = (0..3)
        .map(|j| {
            let cap = xi.col[j];
            let axis: Vec<f64> = (0..steps)
                .map(|k| -cap + 2.0 * cap * k as f64 / (steps - 1) as f64)
                .collect();
            let mut opts = Vec::new();
            for &a in &axis {
                for &b in &axis {
                    let col = [a, b, -a - b];
                    let l1: f64 = col.iter().map(|v| v.abs()).sum();
                    let feasible = l1 <= cap + tol && (0..3).all(|i| col[i] >= -pv[(i, j)] - tol);
                    if feasible {
                        opts.push((col, l1));
                    }
                }
            }
            opts
        })
        .collect();

    let bound = worst_case_upper_bound(
        x1,
        p,
        &RobustBudget::new(xi.total, xi.col.clone())?,
        &GrowthModel::none(),
    )?;
    let mut points = 0;
    let mut max_residual: f64 = 0.0;
    for (c0, n0) in &column_options[0] {
        for (c1, n1) in &column_options[1] {
            if n0 + n1 > xi.total + tol {
                continue;
            }
            for (c2, n2) in &column_options[2] {
                if n0 + n1 + n2 > xi.total + tol {
                    continue;
                }
                let mut r = 0.0;
                for i in 0..3 {
                    let qx: f64 = (0..3)
                        .map(|j| {
                            let c = [c0, c1, c2][j];
                            (pv[(i, j)] + c[i]) * x1[j]
                        })
                        .sum();
                    r += (qx - x1[i]).abs();
                }
                points += 1;
                max_residual = max_residual.max(r);
            }
        }
    }
    Ok(GridSearchReport {
        points,
        max_residual,
        bound_value: bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::dmatrix;

    fn p4() -> TransitionMatrix {
        TransitionMatrix::new(dmatrix![
            0.5, 0.25, 0.0, 0.2;
            0.5, 0.25, 0.3, 0.2;
            0.0, 0.25, 0.7, 0.1;
            0.0, 0.25, 0.0, 0.5
        ])
        .unwrap()
    }

    fn budgets(m: usize) -> SimulationBudgets {
        SimulationBudgets::uniform(4, 1.2, 0.6, 0.8, 0.5, m, 0.3).unwrap()
    }

    #[test]
    fn zero_budgets_reproduce_p() {
        let p = p4();
        let b = SimulationBudgets::new(
            BlockBudget::zero(4),
            BlockBudget::zero(4),
            GrowthModel::none(),
        )
        .unwrap();
        let s = sample_perturbation(&p, &b, 3).unwrap();
        assert_eq!(&s.q, p.values());
    }

    #[test]
    fn samples_are_column_stochastic() {
        let p = p4();
        let b = budgets(2);
        let mut sampler = PerturbationSampler::new(&p, &b, 11).unwrap();
        for _ in 0..200 {
            let s = sampler.sample();
            assert_eq!(s.q.shape(), (6, 6));
            for col in s.q.column_iter() {
                assert!((col.sum() - 1.0).abs() <= 1e-12);
                assert!(col.iter().all(|v| *v >= 0.0));
            }
        }
    }

    #[test]
    fn same_seed_same_sample() {
        let p = p4();
        let b = budgets(2);
        assert_eq!(
            sample_perturbation(&p, &b, 5).unwrap(),
            sample_perturbation(&p, &b, 5).unwrap()
        );
        assert_ne!(
            sample_perturbation(&p, &b, 5).unwrap(),
            sample_perturbation(&p, &b, 6).unwrap()
        );
    }

    #[test]
    fn inconsistent_growth_budgets_are_rejected() {
        let g = GrowthModel {
            m: 2,
            eps_zeta_total: 0.2,
            eps_chi_total: 1.8,
            eps_zeta_col: vec![0.5, 0.5],
            eps_chi_col: vec![0.5, 0.5],
        };
        let r = SimulationBudgets::new(BlockBudget::zero(4), BlockBudget::zero(4), g);
        assert!(matches!(r, Err(Error::SetDefinition(_))));
    }

    #[test]
    fn residual_examples() {
        let swap = dmatrix![0.0, 1.0; 1.0, 0.0];
        assert_eq!(residual(&swap, &[1.0, 0.0]), 2.0);
        assert_eq!(residual(&DMatrix::identity(3, 3), &[0.2, 0.5, 0.3]), 0.0);
        assert_eq!(residual(&swap, &[0.5, 0.5]), 0.0);
    }

    #[test]
    fn zero_budget_report_at_eigenvector() {
        let p = TransitionMatrix::new(dmatrix![0.5, 1.0 / 3.0; 0.5, 2.0 / 3.0]).unwrap();
        // stationary distribution (0.4, 0.6)
        let b = SimulationBudgets::new(
            BlockBudget::zero(2),
            BlockBudget::zero(2),
            GrowthModel::none(),
        )
        .unwrap();
        let r = empirical_phi1(&p, &[0.4, 0.6], &b, 50, 1).unwrap();
        assert!(r.max_residual <= 1e-15);
        assert!(r.bound_value >= 0.0);
        assert_eq!(r.violations, 0);
    }

    #[test]
    fn uniform_vector_is_dominated() {
        let p = p4();
        let b = budgets(2);
        let r = empirical_phi1(&p, &[1.0 / 6.0; 6], &b, 2000, 9).unwrap();
        assert_eq!(r.violations, 0);
        assert!(r.max_residual <= r.bound_value);
    }

    #[test]
    fn fixed_size_ordering_holds() {
        let p = p4();
        let xi = BlockBudget::uniform(1.0, 0.4, 4).unwrap();
        let r = prop2_check(&p, &[0.25; 4], &xi, 500, 2).unwrap();
        assert!(r.passed(), "{r:?}");
        assert!(r.max_fixed_residual <= r.grown_max);
    }

    #[test]
    fn fixed_size_zero_budget_collapses() {
        let p = p4();
        let x = [0.1, 0.2, 0.3, 0.4];
        let r = prop2_check(&p, &x, &BlockBudget::zero(4), 20, 0).unwrap();
        let base = residual(p.values(), &x);
        assert!((r.max_fixed_residual - base).abs() < 1e-15);
        assert!((r.bound_value - base).abs() < 1e-15);
    }

    #[test]
    fn grid_search_small() {
        let p = TransitionMatrix::new(dmatrix![
            0.5, 1.0 / 3.0, 0.0;
            0.5, 1.0 / 3.0, 0.5;
            0.0, 1.0 / 3.0, 0.5
        ])
        .unwrap();
        let xi = BlockBudget::uniform(0.6, 0.4, 3).unwrap();
        let g = grid_search_n3(&p, &[2.0 / 7.0, 3.0 / 7.0, 2.0 / 7.0], &xi, 5).unwrap();
        assert!(g.points > 1);
        assert!(g.max_residual <= g.bound_value + VIOLATION_TOL);
    }
}
