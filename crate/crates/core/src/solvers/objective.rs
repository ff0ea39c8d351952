use super::problem::{Design, FusedProblem, ProblemKind};
use crate::error::{check_len, Error, Result};
use crate::linalg::matvec;

/// `0.5 ||X beta - y||^2 + lam1 ||beta||_1 + lam2 ||L beta||_1` (X = I for signals).
pub fn objective_fused(problem: &FusedProblem, beta: &[f64]) -> Result<f64> {
    if problem.kind() == ProblemKind::Svm {
        return Err(Error::InvalidParameter("use objective_flsvm for svm problems".into()));
    }
    check_len("coefficients", problem.p(), beta.len())?;
    let mut scratch = vec![0.0; problem.n()];
    Ok(fused_objective_with(problem, beta, &mut scratch))
}

pub(crate) fn fused_objective_with(problem: &FusedProblem, beta: &[f64], xb: &mut [f64]) -> f64 {
    let y = problem.y();
    let fit = match problem.design() {
        Design::Dense(x) => {
            matvec(x, beta, xb);
            xb.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>()
        }
        Design::Identity(_) => beta.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>(),
    };
    0.5 * fit + penalty(problem, beta)
}

pub(crate) fn penalty(problem: &FusedProblem, beta: &[f64]) -> f64 {
    let l1: f64 = beta.iter().map(|v| v.abs()).sum();
    problem.lam1() * l1 + problem.lam2() * problem.diff().l1_of_image(beta)
}

/// `(1/n) sum_i (1 - y_i (x_i^T beta + beta0))_+ + lam1 ||beta||_1 + lam2 ||L beta||_1`.
pub fn objective_flsvm(problem: &FusedProblem, beta: &[f64], beta0: f64) -> Result<f64> {
    if problem.kind() != ProblemKind::Svm {
        return Err(Error::InvalidParameter("objective_flsvm needs an svm problem".into()));
    }
    check_len("coefficients", problem.p(), beta.len())?;
    let mut scratch = vec![0.0; problem.n()];
    Ok(svm_objective_with(problem, beta, beta0, &mut scratch))
}

pub(crate) fn svm_objective_with(problem: &FusedProblem, beta: &[f64], beta0: f64, xb: &mut [f64]) -> f64 {
    let x = problem.design().dense().expect("svm problems carry a dense design");
    matvec(x, beta, xb);
    let n = problem.n() as f64;
    let hinge: f64 = xb
        .iter()
        .zip(problem.y())
        .map(|(f, y)| (1.0 - y * (f + beta0)).max(0.0))
        .sum();
    hinge / n + penalty(problem, beta)
}
