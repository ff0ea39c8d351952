use super::config::SolverConfig;
use super::objective::{penalty, svm_objective_with};
use super::problem::{FusedProblem, ProblemKind};
use super::stopping::RelEMonitor;
use super::{Solution, SolverState};
use crate::error::{Error, Result};
use crate::linalg::{
    build_preconditioner, jacobi_diagonal, matvec, matvec_transpose, pcg_in_place, DiffOperator,
    Jacobi, LinearOperator, PcgWorkspace, Preconditioner,
};
use crate::prox::{hinge_shrink_in_place, soft_threshold_in_place};
use ndarray::Array2;
use std::cell::RefCell;

/// Block operator on `(beta, beta0)`:
/// `diag(mu1 I + mu2 L^T L, 0) + mu3 [X^T Y; y^T] [Y X, y]`.
///
/// Because `Y^2 = I`, the low-rank part reduces to `mu3 [X^T; 1^T] [X, 1]`.
struct BlockOperator<'a> {
    x: &'a Array2<f64>,
    diff: &'a DiffOperator,
    mu1: f64,
    mu2: f64,
    mu3: f64,
    fitted: RefCell<Vec<f64>>,
    gram: RefCell<Vec<f64>>,
}

impl LinearOperator for BlockOperator<'_> {
    fn dim(&self) -> usize {
        self.diff.p() + 1
    }

    fn apply(&self, theta: &[f64], out: &mut [f64]) {
        let p = self.diff.p();
        let (beta, beta0) = (&theta[..p], theta[p]);
        let mut fitted = self.fitted.borrow_mut();
        let mut gram = self.gram.borrow_mut();
        matvec(self.x, beta, &mut fitted);
        fitted.iter_mut().for_each(|f| *f += beta0);
        let (out_beta, out_0) = out.split_at_mut(p);
        matvec_transpose(self.x, &fitted, out_beta);
        self.diff.apply_gram_into(beta, &mut gram);
        for i in 0..p {
            out_beta[i] = self.mu3 * out_beta[i] + self.mu1 * beta[i] + self.mu2 * gram[i];
        }
        out_0[0] = self.mu3 * fitted.iter().sum::<f64>();
    }
}

/// `diag(P, mu3 n)` with `P = mu1 I + mu2 L^T L` (tridiagonal for chains, else its diagonal).
struct BlockPreconditioner {
    head: Box<dyn Preconditioner>,
    tail: f64,
}

impl Preconditioner for BlockPreconditioner {
    fn precondition(&self, r: &[f64], z: &mut [f64]) {
        let p = r.len() - 1;
        self.head.precondition(&r[..p], &mut z[..p]);
        z[p] = r[p] / self.tail;
    }
}

/// Split Bregman iteration for the fused Lasso support vector classifier.
///
/// Splits `a = beta`, `b = L beta` and `c = 1 - Y X beta - beta0 y`. The `(beta, beta0)`
/// step is a (p+1)-dimensional system solved by PCG, `c` is updated by hinge shrinkage
/// with threshold `1 / (n mu3)`, and the three duals by ascent steps `delta1..3`.
pub fn sb_flsvm(problem: &FusedProblem, config: &SolverConfig) -> Result<Solution> {
    if problem.kind() != ProblemKind::Svm {
        return Err(Error::InvalidParameter("sb_flsvm needs an svm problem".into()));
    }
    config.validate(true)?;
    let x = problem.design().dense().expect("svm problems carry a dense design");
    let y = problem.y();
    let diff = problem.diff();
    let (n, p, m) = (problem.n(), problem.p(), diff.m());
    let (mu1, mu2, mu3) = (config.mu1, config.mu2, config.mu3);

    let head: Box<dyn Preconditioner> = if diff.is_chain() {
        Box::new(build_preconditioner(diff, mu1, mu2, None)?.cholesky()?)
    } else {
        Box::new(Jacobi::new(&jacobi_diagonal(diff, mu1, mu2, None)?)?)
    };
    let precond = BlockPreconditioner {
        head,
        tail: mu3 * n as f64,
    };
    let op = BlockOperator {
        x,
        diff,
        mu1,
        mu2,
        mu3,
        fitted: RefCell::new(vec![0.0; n]),
        gram: RefCell::new(vec![0.0; p]),
    };
    let mut ws = PcgWorkspace::new(p + 1);
    let pcg_max = config.pcg_max.unwrap_or(p + 1);

    let mut state = SolverState::zeros(p, m, n);
    let mut theta = vec![0.0; p + 1];
    let mut rhs = vec![0.0; p + 1];
    let mut lt_tmp = vec![0.0; p];
    let mut m_tmp = vec![0.0; m];
    let mut lbeta = vec![0.0; m];
    let mut z = vec![0.0; n];
    let mut xt_tmp = vec![0.0; p];
    let mut fitted = vec![0.0; n];
    let mut slack = vec![0.0; n];
    let mut monitor = RelEMonitor::new(config.rel_tol);
    let mut pcg_iters = Vec::new();
    let (thr_a, thr_b, thr_c) = (problem.lam1() / mu1, problem.lam2() / mu2, 1.0 / (n as f64 * mu3));
    let mut converged = false;

    for k in 1..=config.max_iter {
        // 1) (beta, beta0) block step.
        for j in 0..m {
            m_tmp[j] = mu2 * state.b[j] - state.v[j];
        }
        diff.apply_transpose_into(&m_tmp, &mut lt_tmp);
        for i in 0..n {
            z[i] = y[i] * (1.0 - state.c[i] + state.w[i] / mu3);
        }
        matvec_transpose(x, &z, &mut xt_tmp);
        for i in 0..p {
            rhs[i] = mu1 * state.a[i] - state.u[i] + lt_tmp[i] + mu3 * xt_tmp[i];
        }
        rhs[p] = mu3 * z.iter().sum::<f64>();
        theta[..p].copy_from_slice(&state.beta);
        theta[p] = state.beta0;
        let stats = pcg_in_place(&op, &precond, &rhs, &mut theta, config.pcg_tol, pcg_max, &mut ws)?;
        pcg_iters.push(stats.iterations);
        state.beta.copy_from_slice(&theta[..p]);
        state.beta0 = theta[p];

        // 2) a-step and 3) b-step.
        for i in 0..p {
            state.a[i] = state.beta[i] + state.u[i] / mu1;
        }
        soft_threshold_in_place(&mut state.a, thr_a);
        diff.apply_into(&state.beta, &mut lbeta);
        for j in 0..m {
            state.b[j] = lbeta[j] + state.v[j] / mu2;
        }
        soft_threshold_in_place(&mut state.b, thr_b);

        // 4) c = S(1 - Y X beta - beta0 y + w / mu3).
        matvec(x, &state.beta, &mut fitted);
        for i in 0..n {
            slack[i] = 1.0 - y[i] * (fitted[i] + state.beta0);
            state.c[i] = slack[i] + state.w[i] / mu3;
        }
        hinge_shrink_in_place(&mut state.c, thr_c);

        // 5-7) dual ascent.
        for i in 0..p {
            state.u[i] += config.delta1 * (state.beta[i] - state.a[i]);
        }
        for j in 0..m {
            state.v[j] += config.delta2 * (lbeta[j] - state.b[j]);
        }
        for i in 0..n {
            state.w[i] += config.delta3 * (slack[i] - state.c[i]);
        }

        state.k = k;
        let hinge: f64 = slack.iter().map(|s| s.max(0.0)).sum::<f64>() / n as f64;
        let obj = hinge + penalty(problem, &state.beta);
        if !obj.is_finite() || !state.beta0.is_finite() || state.a.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite { iteration: k });
        }
        if monitor.observe(obj) {
            converged = true;
            break;
        }
    }

    diff.apply_into(&state.beta, &mut lbeta);
    matvec(x, &state.beta, &mut fitted);
    let max_gap = |a: &[f64], b: &[f64]| a.iter().zip(b).fold(0.0_f64, |g, (x, y)| g.max((x - y).abs()));
    let gap_beta_a = max_gap(&state.beta, &state.a);
    let gap_lbeta_b = max_gap(&lbeta, &state.b);
    for i in 0..n {
        slack[i] = 1.0 - y[i] * (fitted[i] + state.beta0);
    }
    let gap_hinge = max_gap(&slack, &state.c);

    let coef = state.a.clone();
    let objective = svm_objective_with(problem, &coef, state.beta0, &mut fitted);
    let rel_e = monitor.last_rel_e();
    state.obj_history = monitor.into_history();
    Ok(Solution {
        coef,
        intercept: Some(state.beta0),
        objective,
        iterations: state.k,
        rel_e,
        converged,
        kkt_residual: None,
        pcg_iters,
        gap_beta_a,
        gap_lbeta_b,
        gap_hinge: Some(gap_hinge),
        mu: (mu1, mu2, Some(mu3)),
        state,
    })
}
