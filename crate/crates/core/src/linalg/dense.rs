use ndarray::Array2;

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn norm_inf(a: &[f64]) -> f64 {
    a.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
}

/// `out = X x` for a row-major `X`.
pub fn matvec(x_mat: &Array2<f64>, x: &[f64], out: &mut [f64]) {
    debug_assert_eq!(x_mat.ncols(), x.len());
    debug_assert_eq!(x_mat.nrows(), out.len());
    for (o, row) in out.iter_mut().zip(x_mat.rows()) {
        *o = match row.as_slice() {
            Some(r) => dot(r, x),
            None => row.iter().zip(x).map(|(a, b)| a * b).sum(),
        };
    }
}

/// `out = X^T r`, accumulated row by row so a row-major `X` is read contiguously.
pub fn matvec_transpose(x_mat: &Array2<f64>, r: &[f64], out: &mut [f64]) {
    debug_assert_eq!(x_mat.nrows(), r.len());
    debug_assert_eq!(x_mat.ncols(), out.len());
    out.iter_mut().for_each(|o| *o = 0.0);
    for (&ri, row) in r.iter().zip(x_mat.rows()) {
        if ri == 0.0 {
            continue;
        }
        match row.as_slice() {
            Some(s) => out.iter_mut().zip(s).for_each(|(o, a)| *o += ri * a),
            None => out.iter_mut().zip(row.iter()).for_each(|(o, a)| *o += ri * a),
        }
    }
}
