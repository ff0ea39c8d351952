//! Structured linear algebra for the quadratic sub-steps: the difference
//! operator, symmetric tridiagonal Cholesky and preconditioned conjugate
//! gradients.

mod dense;
mod diff;
mod pcg;
mod tridiag;

pub use dense::{dot, matvec, matvec_transpose, norm2, norm_inf};
pub use diff::DiffOperator;
pub use pcg::{
    pcg, pcg_in_place, symmetry_defect, FnOperator, IdentityPreconditioner, Jacobi,
    LinearOperator, PcgStats, PcgWorkspace, Preconditioner,
};
pub use tridiag::{build_preconditioner, jacobi_diagonal, TridiagFactor, TridiagMatrix};
