use super::dense::{dot, norm2};
use super::tridiag::TridiagFactor;
use crate::error::{check_len, Error, Result};
use rand::Rng;

/// Symmetric positive-definite operator given only through its action.
pub trait LinearOperator {
    fn dim(&self) -> usize;
    fn apply(&self, x: &[f64], out: &mut [f64]);
}

/// Approximate inverse used to precondition conjugate gradients: `z = M^{-1} r`.
pub trait Preconditioner {
    fn precondition(&self, r: &[f64], z: &mut [f64]);
}

/// Wraps a closure `|x, out|` as a [`LinearOperator`].
pub struct FnOperator<F> {
    dim: usize,
    f: F,
}

impl<F: Fn(&[f64], &mut [f64])> FnOperator<F> {
    pub fn new(dim: usize, f: F) -> Self {
        Self { dim, f }
    }
}

impl<F: Fn(&[f64], &mut [f64])> LinearOperator for FnOperator<F> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply(&self, x: &[f64], out: &mut [f64]) {
        (self.f)(x, out)
    }
}

pub struct IdentityPreconditioner;

impl Preconditioner for IdentityPreconditioner {
    fn precondition(&self, r: &[f64], z: &mut [f64]) {
        z.copy_from_slice(r);
    }
}

impl Preconditioner for TridiagFactor {
    fn precondition(&self, r: &[f64], z: &mut [f64]) {
        z.copy_from_slice(r);
        self.solve_in_place(z);
    }
}

/// Diagonal (Jacobi) preconditioner.
#[derive(Debug, Clone)]
pub struct Jacobi {
    inv_diag: Vec<f64>,
}

impl Jacobi {
    pub fn new(diag: &[f64]) -> Result<Self> {
        if let Some(i) = diag.iter().position(|&d| !(d > 0.0)) {
            return Err(Error::NotPositiveDefinite { row: i, pivot: diag[i] });
        }
        Ok(Self {
            inv_diag: diag.iter().map(|d| 1.0 / d).collect(),
        })
    }
}

impl Preconditioner for Jacobi {
    fn precondition(&self, r: &[f64], z: &mut [f64]) {
        for ((zi, ri), di) in z.iter_mut().zip(r).zip(&self.inv_diag) {
            *zi = ri * di;
        }
    }
}

/// Scratch vectors reused across repeated solves of the same dimension.
#[derive(Debug, Clone)]
pub struct PcgWorkspace {
    r: Vec<f64>,
    z: Vec<f64>,
    d: Vec<f64>,
    ad: Vec<f64>,
}

impl PcgWorkspace {
    pub fn new(dim: usize) -> Self {
        Self {
            r: vec![0.0; dim],
            z: vec![0.0; dim],
            d: vec![0.0; dim],
            ad: vec![0.0; dim],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PcgStats {
    pub iterations: usize,
    /// `||A x - rhs||_2 / ||rhs||_2` from the recursively updated residual.
    pub relative_residual: f64,
    pub converged: bool,
}

/// Preconditioned conjugate gradients starting from `x0`.
///
/// Stops when `||A x - rhs|| <= tol ||rhs||` or after `max_iter` iterations
/// (`None` means the system dimension). Returns the iterate and the
/// iteration count.
pub fn pcg<A, M>(
    a: &A,
    m: &M,
    rhs: &[f64],
    x0: &[f64],
    tol: f64,
    max_iter: Option<usize>,
) -> Result<(Vec<f64>, usize)>
where
    A: LinearOperator + ?Sized,
    M: Preconditioner + ?Sized,
{
    check_len("pcg right-hand side", a.dim(), rhs.len())?;
    check_len("pcg initial guess", a.dim(), x0.len())?;
    let mut x = x0.to_vec();
    let mut ws = PcgWorkspace::new(a.dim());
    let stats = pcg_in_place(a, m, rhs, &mut x, tol, max_iter.unwrap_or(a.dim()), &mut ws)?;
    Ok((x, stats.iterations))
}

/// In-place variant: `x` holds the warm start on entry and the iterate on exit.
pub fn pcg_in_place<A, M>(
    a: &A,
    m: &M,
    rhs: &[f64],
    x: &mut [f64],
    tol: f64,
    max_iter: usize,
    ws: &mut PcgWorkspace,
) -> Result<PcgStats>
where
    A: LinearOperator + ?Sized,
    M: Preconditioner + ?Sized,
{
    let n = a.dim();
    debug_assert_eq!(rhs.len(), n);
    debug_assert_eq!(x.len(), n);
    let PcgWorkspace { r, z, d, ad } = ws;

    let rhs_norm = norm2(rhs);
    if rhs_norm == 0.0 {
        x.iter_mut().for_each(|v| *v = 0.0);
        return Ok(PcgStats {
            iterations: 0,
            relative_residual: 0.0,
            converged: true,
        });
    }
    let target = tol * rhs_norm;

    a.apply(x, ad);
    for i in 0..n {
        r[i] = rhs[i] - ad[i];
    }
    let mut r_norm = norm2(r);
    if r_norm <= target {
        return Ok(PcgStats {
            iterations: 0,
            relative_residual: r_norm / rhs_norm,
            converged: true,
        });
    }
    m.precondition(r, z);
    d.copy_from_slice(z);
    let mut rz = dot(r, z);

    let mut iterations = 0;
    while iterations < max_iter {
        a.apply(d, ad);
        let curvature = dot(d, ad);
        if !(curvature > 0.0) || !curvature.is_finite() || !(rz > 0.0) {
            return Err(Error::PcgBreakdown {
                iterations,
                partial: x.to_vec(),
            });
        }
        let alpha = rz / curvature;
        for i in 0..n {
            x[i] += alpha * d[i];
            r[i] -= alpha * ad[i];
        }
        iterations += 1;
        r_norm = norm2(r);
        if r_norm <= target {
            break;
        }
        m.precondition(r, z);
        let rz_next = dot(r, z);
        let beta = rz_next / rz;
        rz = rz_next;
        for i in 0..n {
            d[i] = z[i] + beta * d[i];
        }
    }
    Ok(PcgStats {
        iterations,
        relative_residual: r_norm / rhs_norm,
        converged: r_norm <= target,
    })
}

/// Largest observed `|<Ax, y> - <x, Ay>| / (||x|| ||y||)` over random pairs.
pub fn symmetry_defect<A, R>(a: &A, trials: usize, rng: &mut R) -> f64
where
    A: LinearOperator + ?Sized,
    R: Rng + ?Sized,
{
    let n = a.dim();
    let mut ax = vec![0.0; n];
    let mut ay = vec![0.0; n];
    let mut worst = 0.0_f64;
    for _ in 0..trials {
        let x: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let y: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        a.apply(&x, &mut ax);
        a.apply(&y, &mut ay);
        let defect = (dot(&ax, &y) - dot(&x, &ay)).abs() / (norm2(&x) * norm2(&y)).max(f64::MIN_POSITIVE);
        worst = worst.max(defect);
    }
    worst
}
