//! The split Bregman solvers, their objectives and the stopping rule.

mod config;
mod fused;
mod objective;
mod pretrial;
mod problem;
mod stopping;
mod svm;

pub use config::SolverConfig;
pub use fused::{sb_flsa, sb_fused_lasso};
pub use objective::{objective_flsvm, objective_fused};
pub use pretrial::{mu_candidates, pretrial_select_mu, FALLBACK_MU, MU_GRID};
pub use problem::{Design, FusedProblem, ProblemKind};
pub use stopping::{stop_rel_e, RelEMonitor};
pub use svm::sb_flsvm;

use crate::error::Result;
use crate::verify;

/// Primal and dual iterates of one solver run.
///
/// `c` and `w` are empty and `beta0` stays zero outside the classifier.
#[derive(Debug, Clone, Default)]
pub struct SolverState {
    pub beta: Vec<f64>,
    pub beta0: f64,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub w: Vec<f64>,
    /// Completed iterations.
    pub k: usize,
    /// Objective at `beta^k` after each iteration, starting with iteration 1.
    pub obj_history: Vec<f64>,
}

impl SolverState {
    /// Zero start; with `n > 0` the hinge split starts at `c = 1`, matching `beta = beta0 = 0`.
    pub fn zeros(p: usize, m: usize, n: usize) -> Self {
        Self {
            beta: vec![0.0; p],
            a: vec![0.0; p],
            u: vec![0.0; p],
            b: vec![0.0; m],
            v: vec![0.0; m],
            c: vec![1.0; n],
            w: vec![0.0; n],
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone)]
pub struct Solution {
    /// Coefficients taken from the soft-thresholded split `a`, hence exactly sparse.
    pub coef: Vec<f64>,
    pub intercept: Option<f64>,
    /// Objective at `coef` (and `intercept`).
    pub objective: f64,
    pub iterations: usize,
    /// Relative objective change at the last iteration.
    pub rel_e: f64,
    pub converged: bool,
    pub kkt_residual: Option<f64>,
    /// Conjugate-gradient iterations per outer iteration (zeros for direct solves).
    pub pcg_iters: Vec<usize>,
    /// `||beta - a||_inf` at exit.
    pub gap_beta_a: f64,
    /// `||L beta - b||_inf` at exit.
    pub gap_lbeta_b: f64,
    /// `||1 - Y(X beta + beta0) - c||_inf` at exit (classifier only).
    pub gap_hinge: Option<f64>,
    /// `(mu1, mu2, mu3)` used by the run.
    pub mu: (f64, f64, Option<f64>),
    pub state: SolverState,
}

impl Solution {
    pub fn nonzeros(&self) -> usize {
        self.coef.iter().filter(|&&v| v != 0.0).count()
    }

    /// Largest split-constraint violation at exit.
    pub fn constraint_gap(&self) -> f64 {
        self.gap_beta_a
            .max(self.gap_lbeta_b)
            .max(self.gap_hinge.unwrap_or(0.0))
    }

    /// Whether the split constraints are met to `1e-4 (1 + ||coef||_inf)`.
    pub fn gap_acceptable(&self) -> bool {
        let scale = 1.0 + self.coef.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        self.constraint_gap() <= 1e-4 * scale
    }

    /// Active-set threshold for certifying `coef`.
    ///
    /// `coef` is exactly sparse but `L coef` and the margins are only zero up to the
    /// split gaps, so entries below ten times the propagated gap count as zero.
    pub fn kkt_tol_active(&self, problem: &FusedProblem) -> f64 {
        let mut slack = 2.0 * self.gap_beta_a + self.gap_lbeta_b;
        if let (Some(hinge), Some(x)) = (self.gap_hinge, problem.design().dense()) {
            let row_l1 = x
                .rows()
                .into_iter()
                .map(|r| r.iter().map(|v| v.abs()).sum::<f64>())
                .fold(0.0, f64::max);
            slack = slack.max(row_l1 * self.gap_beta_a + hinge);
        }
        verify::DEFAULT_TOL_ACTIVE.max(10.0 * slack)
    }
}

/// Runs the solver matching the problem kind, with optional pretrial selection of
/// `mu`, and fills in the KKT residual of the returned coefficients.
pub fn solve(problem: &FusedProblem, config: &SolverConfig) -> Result<Solution> {
    let mut solution = solve_uncertified(problem, config)?;
    certify(problem, &mut solution)?;
    Ok(solution)
}

/// [`solve`] without the KKT certificate (`kkt_residual` stays `None`).
pub fn solve_uncertified(problem: &FusedProblem, config: &SolverConfig) -> Result<Solution> {
    let mut config = config.clone();
    if config.mu_auto {
        let (mu1, mu2) = pretrial::pretrial_with(problem, config.probe_iters, &config)?;
        config = config.mu(mu1, mu2);
    }
    match problem.kind() {
        ProblemKind::Regression => sb_fused_lasso(problem, &config),
        ProblemKind::Flsa => sb_flsa(problem, &config),
        ProblemKind::Svm => sb_flsvm(problem, &config),
    }
}

/// Sets `solution.kkt_residual`, using [`Solution::kkt_tol_active`] as the active-set threshold.
pub fn certify(problem: &FusedProblem, solution: &mut Solution) -> Result<()> {
    let tol_active = solution.kkt_tol_active(problem);
    let report = match problem.kind() {
        ProblemKind::Svm => verify::kkt_residual_flsvm(
            problem,
            &solution.coef,
            solution.intercept.unwrap_or(0.0),
            tol_active,
        )?,
        _ => verify::kkt_residual_fused(problem, &solution.coef, tol_active)?,
    };
    solution.kkt_residual = Some(report.residual_inf);
    Ok(())
}
