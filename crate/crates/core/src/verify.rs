//! Randomized identity suite for the dual-norm routines: each check computes
//! the same quantity along two independent routes and records the largest gap.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::dualnorms::{
    box_l1_support, box_l2_support, frobenius_worst_case, norm_a, norm_a_l2_check,
    norm_b_simplex_min, norm_b_simplex_min_lp, BudgetedBox,
};
use crate::error::Result;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub instances: usize,
    pub max_gap: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl IdentityCheck {
    fn new(name: &str, instances: usize, max_gap: f64, tolerance: f64) -> Self {
        Self {
            name: name.to_string(),
            instances,
            max_gap,
            tolerance,
            passed: max_gap <= tolerance,
        }
    }
}

fn random_vec(rng: &mut ChaCha8Rng, n: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(lo..=hi)).collect()
}

/// Random box instance: `N ≤ 8`, entries of `x` in `[−5, 5]`, budgets in `[0, 3]`
/// with a positive total.
fn random_box(rng: &mut ChaCha8Rng) -> (Vec<f64>, BudgetedBox) {
    let n = rng.gen_range(1..=8);
    let x = random_vec(rng, n, -5.0, 5.0);
    let eps = rng.gen_range(1e-3..=3.0);
    let caps = random_vec(rng, n, 0.0, 3.0);
    (
        x,
        BudgetedBox {
            eps_total: eps,
            eps_col: caps,
        },
    )
}

/// `ε·‖x‖₍ₐ₎` (decomposition LP) against the greedy l1 support function.
pub fn l1_duality(instances: usize, seed: u64) -> Result<IdentityCheck> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_gap: f64 = 0.0;
    for _ in 0..instances {
        let (x, b) = random_box(&mut rng);
        let primal = b.eps_total * norm_a(&x, &b)?.value;
        let dual = box_l1_support(&x, &b)?.value;
        max_gap = max_gap.max((primal - dual).abs());
    }
    Ok(IdentityCheck::new(
        "l1 box/budget duality",
        instances,
        max_gap,
        1e-8,
    ))
}

/// l2 decomposition (coordinate descent) against the bisection support function.
pub fn l2_duality(instances: usize, seed: u64) -> Result<IdentityCheck> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_gap: f64 = 0.0;
    for _ in 0..instances {
        let (x, b) = random_box(&mut rng);
        let primal = norm_a_l2_check(&x, &b)?;
        let dual = box_l2_support(&x, &b)?.value;
        max_gap = max_gap.max((primal - dual).abs());
    }
    Ok(IdentityCheck::new(
        "l2 box/budget duality",
        instances,
        max_gap,
        1e-6,
    ))
}

/// Random matrix scaled to Frobenius norm `radius · u`, `u ∈ [0, 1]`.
fn random_in_frobenius_ball(
    rng: &mut ChaCha8Rng,
    rows: usize,
    cols: usize,
    radius: f64,
) -> DMatrix<f64> {
    let m = DMatrix::from_fn(rows, cols, |_, _| rng.gen_range(-1.0..=1.0));
    let norm = m.norm();
    if norm == 0.0 {
        return m;
    }
    let target = radius * rng.gen::<f64>().sqrt();
    m * (target / norm)
}

/// Closed-form Frobenius worst case: attained by its maximizer and never
/// beaten by `samples_each` random feasible perturbations.
pub fn frobenius_identity(
    instances: usize,
    samples_each: usize,
    seed: u64,
) -> Result<IdentityCheck> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_gap: f64 = 0.0;
    for _ in 0..instances {
        let rows = rng.gen_range(1..=5);
        let blocks = rng.gen_range(0..=3);
        let a0 = DVector::from_vec(random_vec(&mut rng, rows, -3.0, 3.0));
        let ai: Vec<DVector<f64>> = (0..blocks)
            .map(|_| {
                let d = rng.gen_range(1..=4);
                DVector::from_vec(random_vec(&mut rng, d, -3.0, 3.0))
            })
            .collect();
        let eps = random_vec(&mut rng, blocks, 0.0, 3.0);
        let w = frobenius_worst_case(&a0, &ai, &eps)?;
        max_gap = max_gap.max((w.attained - w.value).abs());
        for _ in 0..samples_each {
            let mut image = a0.clone();
            for (a, &e) in ai.iter().zip(&eps) {
                image += random_in_frobenius_ball(&mut rng, rows, a.len(), e) * a;
            }
            max_gap = max_gap.max(image.norm() - w.value);
        }
    }
    Ok(IdentityCheck::new(
        "Frobenius worst case",
        instances,
        max_gap,
        1e-9,
    ))
}

/// Closed-form simplex minimum of the weighted decomposition norm against a
/// direct LP, for `M = 1..=6`, plus the exact forced case `c_j = 1/M`.
pub fn simplex_min_exactness(vectors_per_m: usize, seed: u64) -> Result<IdentityCheck> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_gap: f64 = 0.0;
    let mut instances = 0;
    for m in 1..=6usize {
        let inv = 1.0 / m as f64;
        for _ in 0..vectors_per_m {
            // straddle 1/M so both branches of the closed form occur
            let c = random_vec(&mut rng, m, 0.0, 2.0 * inv);
            let closed = norm_b_simplex_min(m, &c)?;
            let lp = norm_b_simplex_min_lp(m, &c)?;
            max_gap = max_gap.max((closed - lp).abs());
            instances += 1;
        }
        let forced = norm_b_simplex_min(m, &vec![inv; m])?;
        if forced != inv {
            max_gap = max_gap.max(f64::INFINITY);
        }
        instances += 1;
    }
    Ok(IdentityCheck::new(
        "simplex minimum of weighted norm",
        instances,
        max_gap,
        1e-9,
    ))
}

/// The whole suite with its default sizes.
pub fn run_identity_suite(seed: u64) -> Result<Vec<IdentityCheck>> {
    Ok(vec![
        l1_duality(200, seed)?,
        l2_duality(100, seed.wrapping_add(1))?,
        frobenius_identity(100, 1000, seed.wrapping_add(2))?,
        simplex_min_exactness(50, seed.wrapping_add(3))?,
    ])
}
