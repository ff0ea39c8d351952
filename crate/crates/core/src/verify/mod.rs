//! Solver-independent correctness checks: KKT certificates and a brute-force
//! sign-pattern oracle for tiny problems.

mod kkt;
mod oracle;

pub use kkt::{
    kkt_residual_flsvm, kkt_residual_flsvm_with, kkt_residual_fused, kkt_residual_fused_with,
    BlockResiduals, KktOptions, KktReport, DEFAULT_TOL_ACTIVE,
};
pub use oracle::{brute_force_fused, brute_force_fused_with_limit, MAX_ORACLE_P};
