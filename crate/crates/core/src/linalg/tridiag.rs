use super::diff::DiffOperator;
use crate::error::{check_len, Error, Result};

/// Symmetric tridiagonal matrix stored as its main and first off-diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagMatrix {
    diag: Vec<f64>,
    offdiag: Vec<f64>,
}

impl TridiagMatrix {
    pub fn new(diag: Vec<f64>, offdiag: Vec<f64>) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::InvalidParameter("empty tridiagonal matrix".into()));
        }
        check_len("tridiagonal off-diagonal", diag.len() - 1, offdiag.len())?;
        Ok(Self { diag, offdiag })
    }

    pub fn identity(p: usize) -> Self {
        Self {
            diag: vec![1.0; p.max(1)],
            offdiag: vec![0.0; p.max(1) - 1],
        }
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn offdiag(&self) -> &[f64] {
        &self.offdiag
    }

    pub fn mul_vec(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_len("tridiagonal product", self.dim(), x.len())?;
        let mut out = vec![0.0; x.len()];
        self.mul_vec_into(x, &mut out);
        Ok(out)
    }

    pub(crate) fn mul_vec_into(&self, x: &[f64], out: &mut [f64]) {
        let p = self.dim();
        for i in 0..p {
            let mut acc = self.diag[i] * x[i];
            if i > 0 {
                acc += self.offdiag[i - 1] * x[i - 1];
            }
            if i + 1 < p {
                acc += self.offdiag[i] * x[i + 1];
            }
            out[i] = acc;
        }
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        let p = self.dim();
        (0..p)
            .map(|i| {
                let mut s = self.diag[i].abs();
                if i > 0 {
                    s += self.offdiag[i - 1].abs();
                }
                if i + 1 < p {
                    s += self.offdiag[i].abs();
                }
                s
            })
            .fold(0.0, f64::max)
    }

    /// Cholesky factorization `P = G G^T` with lower-bidiagonal `G`, O(p).
    pub fn cholesky(&self) -> Result<TridiagFactor> {
        TridiagFactor::new(self)
    }
}

/// Lower-bidiagonal Cholesky factor of a symmetric positive-definite tridiagonal matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagFactor {
    diag: Vec<f64>,
    sub: Vec<f64>,
    inv_diag: Vec<f64>,
}

impl TridiagFactor {
    pub fn new(matrix: &TridiagMatrix) -> Result<Self> {
        let p = matrix.dim();
        let max_diag = matrix.diag.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let floor = 1e-14 * max_diag;
        let mut diag = Vec::with_capacity(p);
        let mut sub = Vec::with_capacity(p.saturating_sub(1));

        let mut pivot = matrix.diag[0];
        for i in 0..p {
            if !(pivot > floor) || !pivot.is_finite() {
                return Err(Error::NotPositiveDefinite { row: i, pivot });
            }
            let d = pivot.sqrt();
            diag.push(d);
            if i + 1 < p {
                let e = matrix.offdiag[i] / d;
                sub.push(e);
                pivot = matrix.diag[i + 1] - e * e;
            }
        }
        let inv_diag = diag.iter().map(|d| 1.0 / d).collect();
        Ok(Self { diag, sub, inv_diag })
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn sub(&self) -> &[f64] {
        &self.sub
    }

    /// Multiplies the factors back together.
    pub fn reconstruct(&self) -> TridiagMatrix {
        let p = self.dim();
        let mut diag = Vec::with_capacity(p);
        for i in 0..p {
            let mut v = self.diag[i] * self.diag[i];
            if i > 0 {
                v += self.sub[i - 1] * self.sub[i - 1];
            }
            diag.push(v);
        }
        let offdiag = self.sub.iter().zip(&self.diag).map(|(e, d)| e * d).collect();
        TridiagMatrix { diag, offdiag }
    }

    pub fn solve(&self, g: &[f64]) -> Result<Vec<f64>> {
        check_len("tridiagonal solve", self.dim(), g.len())?;
        let mut x = g.to_vec();
        self.solve_in_place(&mut x);
        Ok(x)
    }

    /// Forward then backward substitution, overwriting `x` (holding `g`) with the solution.
    pub fn solve_in_place(&self, x: &mut [f64]) {
        let p = self.dim();
        debug_assert_eq!(x.len(), p);
        let (inv, sub) = (&self.inv_diag[..p], &self.sub[..p - 1]);
        let mut prev = x[0] * inv[0];
        x[0] = prev;
        for i in 1..p {
            prev = (x[i] - sub[i - 1] * prev) * inv[i];
            x[i] = prev;
        }
        prev *= inv[p - 1];
        x[p - 1] = prev;
        for i in (0..p - 1).rev() {
            prev = (x[i] - sub[i] * prev) * inv[i];
            x[i] = prev;
        }
    }
}

/// Builds `mu1 I + mu2 L^T L (+ diag(extra))` for a chain operator.
pub fn build_preconditioner(
    op: &DiffOperator,
    mu1: f64,
    mu2: f64,
    extra_diag: Option<&[f64]>,
) -> Result<TridiagMatrix> {
    if !op.is_chain() {
        return Err(Error::UnsupportedOperator);
    }
    check_mu(mu1, mu2)?;
    let mut diag: Vec<f64> = op.gram_diagonal().iter().map(|g| mu1 + mu2 * g).collect();
    add_extra(&mut diag, extra_diag)?;
    let offdiag = vec![-mu2; op.p() - 1];
    TridiagMatrix::new(diag, offdiag)
}

/// Diagonal of `mu1 I + mu2 L^T L (+ diag(extra))` for any operator.
pub fn jacobi_diagonal(
    op: &DiffOperator,
    mu1: f64,
    mu2: f64,
    extra_diag: Option<&[f64]>,
) -> Result<Vec<f64>> {
    check_mu(mu1, mu2)?;
    let mut diag: Vec<f64> = op.gram_diagonal().iter().map(|g| mu1 + mu2 * g).collect();
    add_extra(&mut diag, extra_diag)?;
    Ok(diag)
}

fn check_mu(mu1: f64, mu2: f64) -> Result<()> {
    if !(mu1 > 0.0) || !mu1.is_finite() {
        return Err(Error::InvalidParameter(format!("mu1 must be positive, got {mu1}")));
    }
    if !(mu2 >= 0.0) || !mu2.is_finite() {
        return Err(Error::InvalidParameter(format!("mu2 must be nonnegative, got {mu2}")));
    }
    Ok(())
}

fn add_extra(diag: &mut [f64], extra: Option<&[f64]>) -> Result<()> {
    if let Some(extra) = extra {
        check_len("extra diagonal", diag.len(), extra.len())?;
        diag.iter_mut().zip(extra).for_each(|(d, e)| *d += e);
    }
    Ok(())
}
