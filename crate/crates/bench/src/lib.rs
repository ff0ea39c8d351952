//! Shared fixtures for the criterion benchmarks.

use fusedbregman::data;
use fusedbregman::FusedProblem;
use ndarray::Array2;

pub const SEED: u64 = 2024;

/// Standardized equicorrelated design with the default coefficient pattern.
pub fn regression(n: usize, p: usize, rho: f64, lam1: f64, lam2: f64) -> FusedProblem {
    let x: Array2<f64> = data::gen_equicorrelated(n, p, rho, SEED)
        .expect("fixture design")
        .x
        .expect("design matrix");
    let beta = data::default_beta(p).expect("p >= 125");
    let y = data::gen_regression(&x, &beta, data::DEFAULT_REGRESSION_SIGMA, SEED + 1).expect("fixture response");
    FusedProblem::regression(x, y, lam1, lam2).expect("fixture problem")
}

/// Piecewise-constant signal with the default noise level.
pub fn flsa(p: usize, lam1: f64, lam2: f64) -> FusedProblem {
    let y = data::gen_flsa_signal(p, data::DEFAULT_FLSA_SIGMA, SEED).expect("fixture signal");
    FusedProblem::flsa(y, lam1, lam2).expect("fixture problem")
}

/// Smooth right-hand side that is not an eigenvector of the chain operators.
pub fn rhs(p: usize) -> Vec<f64> {
    (0..p).map(|i| (i as f64 * 0.37).sin() + 0.1).collect()
}
