//! Split Bregman (augmented Lagrangian) solvers for the fused Lasso family.
//!
//! Three problems are covered, all sharing the penalty
//! `lam1 * ||beta||_1 + lam2 * ||L beta||_1` where `L` is a difference operator:
//!
//! - fused Lasso regression, `0.5 * ||X beta - y||^2 + penalty` ([`sb_fused_lasso`]);
//! - the fused Lasso signal approximator (identity design, [`sb_flsa`]);
//! - the fused Lasso support vector classifier with averaged hinge loss ([`sb_flsvm`]).
//!
//! Each solver splits the non-smooth terms into auxiliary variables `a = beta`,
//! `b = L beta` (and `c = 1 - Y(X beta + beta0)` for the classifier), updates them
//! with closed-form shrinkage maps, and solves the remaining quadratic step either
//! with a direct tridiagonal Cholesky solve or with preconditioned conjugate
//! gradients. The [`verify`] module provides solver-independent KKT certificates
//! and brute-force oracles for tiny instances; [`data`] generates synthetic
//! problems and reads CSV inputs.
//!
//! ```
//! use fusedbregman::{sb_flsa, FusedProblem, SolverConfig};
//!
//! let y = vec![0.1, -0.2, 2.1, 1.9, 2.0, 0.0];
//! let problem = FusedProblem::flsa(y, 0.1, 0.5).unwrap();
//! let solution = sb_flsa(&problem, &SolverConfig::with_mu(1.0)).unwrap();
//! assert!(solution.converged);
//! ```

// `!(x > 0.0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod data;
mod error;
pub mod linalg;
pub mod prox;
pub mod solvers;
pub mod verify;

pub use error::{Error, Result};
pub use linalg::{DiffOperator, TridiagFactor, TridiagMatrix};
pub use solvers::{
    certify, objective_flsvm, objective_fused, pretrial_select_mu, sb_flsa, sb_fused_lasso,
    sb_flsvm, solve, solve_uncertified, stop_rel_e, Design, FusedProblem, ProblemKind, Solution,
    SolverConfig, SolverState,
};
pub use verify::{brute_force_fused, kkt_residual_flsvm, kkt_residual_fused, KktReport};
