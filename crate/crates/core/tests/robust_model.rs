use nalgebra::dmatrix;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use robust_lexrank::dualnorms::box_l1_support;
use robust_lexrank::graph::{transition_from_similarity, TransitionMatrix};
use robust_lexrank::ranking::eigen_residual;
use robust_lexrank::robust::{
    comparative_rank, default_ids, robust_objective, solve_robust, worst_case_upper_bound,
    GrowthModel, RobustBudget,
};
use robust_lexrank::simulator::{residual, PerturbationSampler, SimulationBudgets};
use robust_lexrank::{build_similarity_matrix, fixtures};

fn news_p(threshold: f64) -> TransitionMatrix {
    let sim = build_similarity_matrix(&fixtures::news_cluster().unwrap()).unwrap();
    transition_from_similarity(&sim, threshold).unwrap()
}

#[test]
fn padded_optimum_bound_equals_objective() {
    let p = news_p(0.1);
    let b = RobustBudget::uniform(0.5, 0.3, 11).unwrap();
    let res = solve_robust(&p, &b, &default_ids(11)).unwrap();
    let mut x = res.x1.values().to_vec();
    x.extend([0.0; 3]);
    let bound = worst_case_upper_bound(&x, &p, &b, &GrowthModel::uniform(3, 0.4).unwrap()).unwrap();
    assert!(
        (bound - res.objective).abs() <= 1e-7,
        "{bound} vs {}",
        res.objective
    );
}

#[test]
fn budget_scaling_is_affine_at_fixed_x() {
    let p = news_p(0.2);
    let base = RobustBudget::uniform(0.7, 0.4, 11).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..20 {
        let raw: Vec<f64> = (0..11).map(|_| rng.gen::<f64>()).collect();
        let s: f64 = raw.iter().sum();
        let x: Vec<f64> = raw.iter().map(|v| v / s).collect();
        let f: Vec<f64> = [0.0, 1.0, 2.0]
            .iter()
            .map(|&c| robust_objective(&p, &base.scaled(c).unwrap(), &x).unwrap())
            .collect();
        assert!((f[0] - eigen_residual(&p, &x)).abs() <= 1e-12);
        assert!((f[2] - 2.0 * f[1] + f[0]).abs() <= 1e-12);
    }
}

/// Minimum over a fine grid of the generated coordinate, evaluated directly.
fn comparative_grid_oracle(p: &TransitionMatrix, b: &RobustBudget) -> (f64, f64) {
    let steps = 20_000;
    let mut best = (f64::INFINITY, 0.0);
    for k in 0..=steps {
        let x3 = k as f64 / steps as f64;
        let x = [1.0, 1.0, x3];
        let v = eigen_residual(p, &x) + box_l1_support(&x, &b.as_box()).unwrap().value;
        if v < best.0 {
            best = (v, x3);
        }
    }
    best
}

#[test]
fn comparative_three_sentences_against_oracle() {
    let isolated = TransitionMatrix::new(dmatrix![
        0.5, 0.5, 0.0;
        0.5, 0.5, 0.0;
        0.0, 0.0, 1.0
    ])
    .unwrap();
    let linked = TransitionMatrix::new(dmatrix![
        0.5, 1.0 / 3.0, 0.0;
        0.5, 1.0 / 3.0, 0.5;
        0.0, 1.0 / 3.0, 0.5
    ])
    .unwrap();
    for p in [&isolated, &linked] {
        for eps in [0.01, 0.5, 2.0] {
            let b = RobustBudget::uniform(eps, eps, 3).unwrap();
            let res = comparative_rank(p, 2, &b, &default_ids(3)).unwrap();
            let (oracle_value, _) = comparative_grid_oracle(p, &b);
            assert!(
                (res.objective - oracle_value).abs() <= 1e-3,
                "{} vs {oracle_value}",
                res.objective
            );
            assert!(res.objective <= oracle_value + 1e-9);
            assert_eq!(&res.raw[..2], &[1.0, 1.0]);
            assert!((0.0..=1.0).contains(&res.raw[2]));
            assert!(res.normalized[2] <= res.normalized[0]);
        }
    }
}

#[test]
fn sampled_members_respect_every_budget() {
    let p = TransitionMatrix::new(dmatrix![
        0.5, 0.25, 0.0, 0.2;
        0.5, 0.25, 0.3, 0.2;
        0.0, 0.25, 0.7, 0.1;
        0.0, 0.25, 0.0, 0.5
    ])
    .unwrap();
    let budgets = SimulationBudgets::uniform(4, 0.9, 0.6, 0.7, 0.4, 2, 0.3).unwrap();
    let mut sampler = PerturbationSampler::new(&p, &budgets, 21).unwrap();
    let (n, m) = (4, 2);
    let l1 = |q: &nalgebra::DMatrix<f64>,
              rows: std::ops::Range<usize>,
              j: usize,
              sub: Option<&TransitionMatrix>|
     -> f64 {
        rows.map(|i| (q[(i, j)] - sub.map_or(0.0, |p| p.values()[(i, j)])).abs())
            .sum()
    };
    for _ in 0..1000 {
        let q = sampler.sample().q;
        let tol = 1e-12;
        let (mut xi_total, mut psi_total, mut zeta_total, mut chi_total) = (0.0, 0.0, 0.0, 0.0);
        for j in 0..n {
            let xi = l1(&q, 0..n, j, Some(&p));
            let psi = l1(&q, n..n + m, j, None);
            assert!(xi <= budgets.xi.col[j] + tol && psi <= budgets.psi.col[j] + tol);
            xi_total += xi;
            psi_total += psi;
        }
        for j in n..n + m {
            let zeta = l1(&q, 0..n, j, None);
            let chi = l1(&q, n..n + m, j, None);
            assert!(zeta <= budgets.growth.eps_zeta_col[j - n] + tol);
            assert!(chi <= budgets.growth.eps_chi_col[j - n] + tol);
            zeta_total += zeta;
            chi_total += chi;
        }
        assert!(xi_total <= budgets.xi.total + tol && psi_total <= budgets.psi.total + tol);
        assert!(
            zeta_total <= budgets.growth.eps_zeta_total + tol
                && chi_total <= budgets.growth.eps_chi_total + tol
        );
        assert!(q.iter().all(|v| *v >= 0.0));
        for col in q.column_iter() {
            assert!((col.sum() - 1.0).abs() <= 1e-12);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_points_are_dominated(weights in prop::collection::vec(0.0f64..1.0, 13), seed in 0u64..1000) {
        prop_assume!(weights.iter().sum::<f64>() > 0.0);
        let p = news_p(0.1);
        let s: f64 = weights.iter().sum();
        let x: Vec<f64> = weights.iter().map(|w| w / s).collect();
        let budgets = SimulationBudgets::uniform(11, 1.5, 0.6, 1.0, 0.5, 2, 0.7).unwrap();
        let bound = worst_case_upper_bound(&x, &p, &budgets.robust_budget(), &budgets.growth).unwrap();
        let mut sampler = PerturbationSampler::new(&p, &budgets, seed).unwrap();
        for _ in 0..20 {
            prop_assert!(residual(&sampler.sample().q, &x) <= bound + 1e-9);
        }
    }
}
