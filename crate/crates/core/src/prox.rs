//! Closed-form proximal maps used by the split steps.
//!
//! Both maps write exact `0.0` on their dead zones so sparsity counts of the
//! returned vectors are well defined.

use crate::error::{Error, Result};

/// Scalar soft threshold `sgn(w) max(|w| - lam, 0)`.
#[inline]
pub fn soft_threshold_scalar(w: f64, lam: f64) -> f64 {
    // Branch-free; both terms are exactly zero on the dead zone.
    (w - lam).max(0.0) + (w + lam).min(0.0)
}

/// Scalar prox of `lam * x_+`.
#[inline]
pub fn hinge_shrink_scalar(w: f64, lam: f64) -> f64 {
    if w > lam {
        w - lam
    } else if w >= 0.0 {
        0.0
    } else {
        w
    }
}

/// Componentwise soft thresholding, the prox of `lam ||.||_1`.
pub fn soft_threshold(w: &[f64], lam: f64) -> Result<Vec<f64>> {
    check_lambda(lam)?;
    Ok(w.iter().map(|&v| soft_threshold_scalar(v, lam)).collect())
}

/// Componentwise hinge shrinkage, the prox of `lam * sum_i (x_i)_+`.
pub fn hinge_shrink(w: &[f64], lam: f64) -> Result<Vec<f64>> {
    check_lambda(lam)?;
    Ok(w.iter().map(|&v| hinge_shrink_scalar(v, lam)).collect())
}

pub(crate) fn soft_threshold_in_place(w: &mut [f64], lam: f64) {
    w.iter_mut().for_each(|v| *v = soft_threshold_scalar(*v, lam));
}

pub(crate) fn hinge_shrink_in_place(w: &mut [f64], lam: f64) {
    w.iter_mut().for_each(|v| *v = hinge_shrink_scalar(*v, lam));
}

fn check_lambda(lam: f64) -> Result<()> {
    if lam >= 0.0 && lam.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("threshold must be nonnegative, got {lam}")))
    }
}
