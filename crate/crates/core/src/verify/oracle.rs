use crate::error::{Error, Result};
use crate::solvers::{objective_fused, Design, FusedProblem, ProblemKind};

/// Largest coefficient dimension [`brute_force_fused`] accepts (3^p * 3^(p-1) patterns).
pub const MAX_ORACLE_P: usize = 5;

/// Exact minimizer of a tiny fused Lasso or signal problem by sign-pattern enumeration.
///
/// Every sign pattern of `beta` and of `L beta` in {-1, 0, +1} fixes the non-smooth
/// terms to linear ones and the zero entries to equality constraints. Each such
/// quadratic is minimized in closed form over its fused blocks; candidates that
/// contradict their own pattern are dropped and the best surviving one is returned
/// with its objective. Assumes `X` has full column rank, so the minimizer is unique.
pub fn brute_force_fused(problem: &FusedProblem) -> Result<(Vec<f64>, f64)> {
    brute_force_fused_with_limit(problem, MAX_ORACLE_P)
}

/// [`brute_force_fused`] with an explicit dimension budget.
pub fn brute_force_fused_with_limit(problem: &FusedProblem, max_p: usize) -> Result<(Vec<f64>, f64)> {
    if problem.kind() == ProblemKind::Svm {
        return Err(Error::OracleRefused("hinge-loss problems are not supported".into()));
    }
    if !problem.diff().is_chain() {
        return Err(Error::OracleRefused("only the chain difference operator is supported".into()));
    }
    let p = problem.p();
    if p > max_p {
        return Err(Error::OracleRefused(format!("p = {p} exceeds the budget of {max_p}")));
    }

    // Gram matrix and X^T y.
    let (gram, xty) = match problem.design() {
        Design::Dense(x) => {
            let mut gram = vec![vec![0.0; p]; p];
            let mut xty = vec![0.0; p];
            for (row, &yi) in x.rows().into_iter().zip(problem.y()) {
                for j in 0..p {
                    xty[j] += row[j] * yi;
                    for k in 0..p {
                        gram[j][k] += row[j] * row[k];
                    }
                }
            }
            (gram, xty)
        }
        Design::Identity(_) => {
            let mut gram = vec![vec![0.0; p]; p];
            (0..p).for_each(|j| gram[j][j] = 1.0);
            (gram, problem.y().to_vec())
        }
    };
    let (lam1, lam2) = (problem.lam1(), problem.lam2());

    let mut best: Option<(Vec<f64>, f64)> = None;
    let mut sigma = vec![-1i8; p];
    let mut tau = vec![-1i8; p.saturating_sub(1)];
    loop {
        loop {
            if let Some(beta) = solve_pattern(&gram, &xty, lam1, lam2, &sigma, &tau) {
                let obj = objective_fused(problem, &beta)?;
                if best.as_ref().is_none_or(|(_, b)| obj < *b) {
                    best = Some((beta, obj));
                }
            }
            if !advance(&mut tau) {
                break;
            }
        }
        if !advance(&mut sigma) {
            break;
        }
    }
    best.ok_or_else(|| Error::OracleRefused("no pattern produced a solvable system".into()))
}

/// Odometer over {-1, 0, 1}^len; false once it wraps around.
fn advance(digits: &mut [i8]) -> bool {
    for d in digits.iter_mut() {
        if *d < 1 {
            *d += 1;
            return true;
        }
        *d = -1;
    }
    false
}

fn solve_pattern(
    gram: &[Vec<f64>],
    xty: &[f64],
    lam1: f64,
    lam2: f64,
    sigma: &[i8],
    tau: &[i8],
) -> Option<Vec<f64>> {
    let p = sigma.len();
    // Fused blocks: runs joined by tau = 0. A block touching sigma = 0 is pinned at zero.
    let mut blocks: Vec<(usize, usize)> = Vec::new();
    let mut start = 0;
    for i in 0..p {
        if i + 1 == p || tau[i] != 0 {
            blocks.push((start, i + 1));
            start = i + 1;
        }
    }
    let mut free: Vec<(usize, usize)> = Vec::new();
    for &(s, e) in &blocks {
        if sigma[s..e].iter().all(|&v| v != 0) {
            free.push((s, e));
        }
    }
    let mut beta = vec![0.0; p];
    if !free.is_empty() {
        let k = free.len();
        // Linear term lam1 sigma + lam2 L^T tau, with (L^T tau)_i = tau_{i-1} - tau_i.
        let lin = |i: usize| {
            let prev = if i > 0 { tau[i - 1] as f64 } else { 0.0 };
            let next = if i + 1 < p { tau[i] as f64 } else { 0.0 };
            lam1 * sigma[i] as f64 + lam2 * (prev - next)
        };
        let mut a = vec![vec![0.0; k]; k];
        let mut rhs = vec![0.0; k];
        for (bi, &(s, e)) in free.iter().enumerate() {
            for i in s..e {
                rhs[bi] += xty[i] - lin(i);
                for (bj, &(s2, e2)) in free.iter().enumerate() {
                    for j in s2..e2 {
                        a[bi][bj] += gram[i][j];
                    }
                }
            }
        }
        let theta = gauss_solve(a, rhs)?;
        for (bi, &(s, e)) in free.iter().enumerate() {
            beta[s..e].iter_mut().for_each(|b| *b = theta[bi]);
        }
    }

    let scale = 1.0 + beta.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let tol = 1e-12 * scale;
    let sign_ok = sigma.iter().zip(&beta).all(|(&s, &b)| s as f64 * b >= -tol);
    let diff_ok = tau
        .iter()
        .enumerate()
        .all(|(j, &t)| t as f64 * (beta[j + 1] - beta[j]) >= -tol);
    (sign_ok && diff_ok).then_some(beta)
}

/// Gaussian elimination with partial pivoting; `None` if numerically singular.
fn gauss_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    let scale = a.iter().flatten().fold(0.0_f64, |m, v| m.max(v.abs()));
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() <= 1e-12 * scale {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            for j in col..n {
                a[row][j] -= f * a[col][j];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|j| a[i][j] * x[j]).sum();
        x[i] = (b[i] - s) / a[i][i];
    }
    Some(x)
}
