use super::config::SolverConfig;
use super::objective::{objective_flsvm, objective_fused};
use super::problem::{FusedProblem, ProblemKind};
use super::{fused, svm};
use crate::error::Result;
use crate::linalg::norm2;

/// Relative candidates; `mu1 = mu2 = factor * ||y||_2`.
pub const MU_GRID: [f64; 5] = [0.2, 0.4, 0.6, 0.8, 1.0];

/// Value used when the grid collapses (`||y||_2 = 0`).
pub const FALLBACK_MU: f64 = 1.0;

/// Candidate augmentation weights for a problem.
pub fn mu_candidates(problem: &FusedProblem) -> Vec<f64> {
    let scale = match problem.kind() {
        ProblemKind::Regression | ProblemKind::Flsa => norm2(problem.y()),
        // ||1||_2: labels are +-1, so this equals ||y||_2 as well.
        ProblemKind::Svm => (problem.n() as f64).sqrt(),
    };
    if scale > 0.0 && scale.is_finite() {
        MU_GRID.iter().map(|f| f * scale).collect()
    } else {
        vec![FALLBACK_MU]
    }
}

/// Runs `probe_iters` iterations at each grid candidate and returns the `(mu1, mu2)`
/// with the largest objective decrease per iteration.
pub fn pretrial_select_mu(problem: &FusedProblem, probe_iters: usize) -> Result<(f64, f64)> {
    pretrial_with(problem, probe_iters, &SolverConfig::default())
}

pub(crate) fn pretrial_with(problem: &FusedProblem, probe_iters: usize, base: &SolverConfig) -> Result<(f64, f64)> {
    let candidates = mu_candidates(problem);
    if candidates.len() == 1 {
        return Ok((candidates[0], candidates[0]));
    }
    let p = problem.p();
    let start = match problem.kind() {
        ProblemKind::Svm => objective_flsvm(problem, &vec![0.0; p], 0.0)?,
        _ => objective_fused(problem, &vec![0.0; p])?,
    };

    let mut best: Option<(f64, f64)> = None;
    for &mu in &candidates {
        let config = SolverConfig {
            max_iter: probe_iters.max(1),
            mu_auto: false,
            ..base.clone()
        }
        .mu(mu, mu);
        let run = match problem.kind() {
            ProblemKind::Svm => svm::sb_flsvm(problem, &config),
            _ => fused::run(problem, &config),
        };
        let Ok(sol) = run else {
            log::debug!("pretrial candidate mu={mu} failed");
            continue;
        };
        let last = *sol.state.obj_history.last().unwrap_or(&start);
        let rate = (start - last) / sol.iterations.max(1) as f64;
        log::debug!("pretrial mu={mu}: decrease/iter {rate:e}");
        if best.is_none_or(|(_, r)| rate > r) {
            best = Some((mu, rate));
        }
    }
    let mu = best.map_or(candidates[0], |(mu, _)| mu);
    Ok((mu, mu))
}
