// Support functions of budgeted boxes against the decomposition norms they
// induce, plus the closed-form Frobenius worst case.

use nalgebra::dvector;
use robust_lexrank::dualnorms::{
    box_l1_support, box_l2_support, frobenius_worst_case, norm_a, norm_a_l2_check,
    norm_b_simplex_min, norm_b_simplex_min_lp, BudgetedBox,
};

pub fn run_example() -> robust_lexrank::Result<()> {
    let x = [3.0, -1.0, 0.5];
    let budget = BudgetedBox::new(1.5, vec![1.0, 1.0, 0.2])?;

    let support = box_l1_support(&x, &budget)?;
    let split = norm_a(&x, &budget)?;
    println!(
        "l1 box: support {:.6} at z = {:?}",
        support.value, support.z
    );
    println!(
        "        eps * norm {:.6} with lambda = {:?}, mu = {:?}",
        budget.eps_total * split.value,
        split.lambda,
        split.mu
    );

    let l2 = box_l2_support(&x, &budget)?;
    println!(
        "l2 box: support {:.6}, decomposition {:.6}",
        l2.value,
        norm_a_l2_check(&x, &budget)?
    );

    let worst = frobenius_worst_case(
        &dvector![1.0, 2.0],
        &[dvector![0.0, 3.0], dvector![1.0]],
        &[0.5, 2.0],
    )?;
    println!(
        "Frobenius worst case {:.6}, attained {:.6}",
        worst.value, worst.attained
    );

    for m in 1..=4 {
        let c: Vec<f64> = (0..m).map(|j| 0.4 + 0.1 * j as f64).collect();
        println!(
            "M = {m}: simplex minimum {:.6} (LP {:.6})",
            norm_b_simplex_min(m, &c)?,
            norm_b_simplex_min_lp(m, &c)?
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> robust_lexrank::Result<()> {
    run_example()
}
