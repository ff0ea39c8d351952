use crate::error::{check_len, Error, Result};
use crate::linalg::{matvec, matvec_transpose, norm_inf, DiffOperator};
use crate::solvers::{Design, FusedProblem, ProblemKind};

/// Magnitude below which a coordinate's subgradient is treated as free.
pub const DEFAULT_TOL_ACTIVE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KktOptions {
    pub tol_active: f64,
    /// `feasible_subgradient` is set when the residual is at most this value.
    pub certify_tol: f64,
    /// Coordinate-descent sweeps for the box-constrained residual minimization.
    pub max_sweeps: usize,
    /// Stop sweeping once no coordinate moves by more than this.
    pub sweep_tol: f64,
}

impl Default for KktOptions {
    fn default() -> Self {
        Self {
            tol_active: DEFAULT_TOL_ACTIVE,
            certify_tol: 1e-6,
            max_sweeps: 500,
            sweep_tol: 1e-10,
        }
    }
}

/// Sizes (infinity norms) of the terms of the stationarity condition at the
/// best multipliers found.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BlockResiduals {
    /// Gradient (or hinge subgradient) of the loss with respect to `beta`.
    pub smooth: f64,
    /// `lam1 * s`.
    pub l1: f64,
    /// `lam2 * L^T q`.
    pub tv: f64,
    /// Intercept condition `|y^T s| / n` (classifier only).
    pub intercept: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KktReport {
    /// Infinity norm of the smallest stationarity residual found.
    pub residual_inf: f64,
    pub feasible_subgradient: bool,
    pub per_block: BlockResiduals,
    /// Multipliers for `||beta||_1` (in [-1, 1]).
    pub l1_multiplier: Vec<f64>,
    /// Multipliers for `||L beta||_1` (in [-1, 1]).
    pub tv_multiplier: Vec<f64>,
    /// Hinge multipliers `s_i` in the subdifferential of `(c_i)_+` (classifier only).
    pub hinge_multiplier: Option<Vec<f64>>,
}

/// Admissible range of one multiplier.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Bounds {
    lo: f64,
    hi: f64,
}

impl Bounds {
    fn point(v: f64) -> Self {
        Self { lo: v, hi: v }
    }

    fn clamp(&self, v: f64) -> f64 {
        v.max(self.lo).min(self.hi)
    }

    fn is_free(&self) -> bool {
        self.lo < self.hi
    }

    fn intersect(&self, other: &Bounds) -> Option<Bounds> {
        let b = Bounds {
            lo: self.lo.max(other.lo),
            hi: self.hi.min(other.hi),
        };
        (b.lo <= b.hi).then_some(b)
    }
}

/// Subdifferential of `|x|` after classifying `x` against `tol`.
fn abs_bounds(x: f64, tol: f64) -> Bounds {
    if x > tol {
        Bounds::point(1.0)
    } else if x < -tol {
        Bounds::point(-1.0)
    } else {
        Bounds { lo: -1.0, hi: 1.0 }
    }
}

/// Subdifferential of `x_+`: {1} for x > 0, [0, 1] at 0, {0} for x < 0.
fn hinge_bounds(x: f64, tol: f64) -> Bounds {
    if x > tol {
        Bounds::point(1.0)
    } else if x < -tol {
        Bounds::point(0.0)
    } else {
        Bounds { lo: 0.0, hi: 1.0 }
    }
}

/// KKT residual of a fused Lasso or signal-approximator candidate.
///
/// Minimizes `||g + lam1 s + lam2 L^T q||_inf` over multipliers `s`, `q` constrained
/// to the subdifferentials at `beta`, where `g = X^T (X beta - y)`.
pub fn kkt_residual_fused(problem: &FusedProblem, beta: &[f64], tol_active: f64) -> Result<KktReport> {
    kkt_residual_fused_with(
        problem,
        beta,
        &KktOptions {
            tol_active,
            ..KktOptions::default()
        },
    )
}

pub fn kkt_residual_fused_with(problem: &FusedProblem, beta: &[f64], opts: &KktOptions) -> Result<KktReport> {
    if problem.kind() == ProblemKind::Svm {
        return Err(Error::InvalidParameter("use kkt_residual_flsvm for svm problems".into()));
    }
    check_len("coefficients", problem.p(), beta.len())?;
    let p = problem.p();
    let mut grad = vec![0.0; p];
    match problem.design() {
        Design::Dense(x) => {
            let mut r = vec![0.0; problem.n()];
            matvec(x, beta, &mut r);
            r.iter_mut().zip(problem.y()).for_each(|(a, b)| *a -= b);
            matvec_transpose(x, &r, &mut grad);
        }
        Design::Identity(_) => {
            grad.iter_mut()
                .zip(beta.iter().zip(problem.y()))
                .for_each(|(g, (b, y))| *g = b - y);
        }
    }
    let diff = problem.diff();
    let s_box: Vec<Bounds> = beta.iter().map(|&b| abs_bounds(b, opts.tol_active)).collect();
    let lbeta = diff.apply(beta)?;
    let q_box: Vec<Bounds> = lbeta.iter().map(|&d| abs_bounds(d, opts.tol_active)).collect();

    let (s, q) = if diff.is_chain() {
        chain_multipliers(&grad, &s_box, &q_box, problem.lam1(), problem.lam2())
    } else {
        general_multipliers(&grad, &s_box, &q_box, diff, problem.lam1(), problem.lam2(), opts)
    };
    Ok(assemble(problem, &grad, s, q, None, 0.0, opts))
}

/// KKT residual of a classifier candidate `(beta, beta0)`.
///
/// The stationarity condition is `-(1/n) X^T Y s + lam1 p + lam2 L^T q = 0` together
/// with `y^T s = 0`, where `s_i` lies in the subdifferential of `(c_i)_+` at
/// `c_i = 1 - y_i (x_i^T beta + beta0)`. The intercept condition enters the reported
/// residual as `|y^T s| / n`, on the same scale as the `beta` rows.
pub fn kkt_residual_flsvm(problem: &FusedProblem, beta: &[f64], beta0: f64, tol_active: f64) -> Result<KktReport> {
    kkt_residual_flsvm_with(
        problem,
        beta,
        beta0,
        &KktOptions {
            tol_active,
            max_sweeps: 5000,
            ..KktOptions::default()
        },
    )
}

pub fn kkt_residual_flsvm_with(problem: &FusedProblem, beta: &[f64], beta0: f64, opts: &KktOptions) -> Result<KktReport> {
    if problem.kind() != ProblemKind::Svm {
        return Err(Error::InvalidParameter("kkt_residual_flsvm needs an svm problem".into()));
    }
    check_len("coefficients", problem.p(), beta.len())?;
    let x = problem.design().dense().expect("svm problems carry a dense design");
    let y = problem.y();
    let diff = problem.diff();
    let (n, p) = (problem.n(), problem.p());
    let (lam1, lam2) = (problem.lam1(), problem.lam2());
    let inv_n = 1.0 / n as f64;

    let mut fitted = vec![0.0; n];
    matvec(x, beta, &mut fitted);
    let h_box: Vec<Bounds> = fitted
        .iter()
        .zip(y)
        .map(|(f, yi)| hinge_bounds(1.0 - yi * (f + beta0), opts.tol_active))
        .collect();
    let s_box: Vec<Bounds> = beta.iter().map(|&b| abs_bounds(b, opts.tol_active)).collect();
    let lbeta = diff.apply(beta)?;
    let q_box: Vec<Bounds> = lbeta.iter().map(|&d| abs_bounds(d, opts.tol_active)).collect();
    let rows = row_lists(diff);

    // Coordinate descent on 0.5 (||R||^2 + rho^2) with
    // R = -(1/n) X^T Y h + lam1 s + lam2 L^T q and rho = (1/n) y^T h.
    let mut h: Vec<f64> = h_box.iter().map(|b| 0.5 * (b.lo + b.hi)).collect();
    let mut s: Vec<f64> = s_box.iter().map(|b| 0.5 * (b.lo + b.hi)).collect();
    let mut q: Vec<f64> = q_box.iter().map(|b| 0.5 * (b.lo + b.hi)).collect();
    let hinge_grad = |h: &[f64]| {
        let yh: Vec<f64> = h.iter().zip(y).map(|(a, b)| -inv_n * a * b).collect();
        let mut out = vec![0.0; p];
        matvec_transpose(x, &yh, &mut out);
        out
    };
    let mut resid = hinge_grad(&h);
    let lt_q = diff.apply_transpose(&q)?;
    for i in 0..p {
        resid[i] += lam1 * s[i] + lam2 * lt_q[i];
    }
    let mut rho: f64 = inv_n * h.iter().zip(y).map(|(a, b)| a * b).sum::<f64>();
    let row_norm2: Vec<f64> = x
        .rows()
        .into_iter()
        .map(|r| inv_n * inv_n * (r.iter().map(|v| v * v).sum::<f64>() + 1.0))
        .collect();

    for _ in 0..opts.max_sweeps {
        let mut moved = 0.0_f64;
        for i in 0..n {
            if !h_box[i].is_free() {
                continue;
            }
            let row = x.row(i);
            let col_scale = -inv_n * y[i];
            let g = col_scale * row.iter().zip(&resid).map(|(a, r)| a * r).sum::<f64>() + rho * inv_n * y[i];
            let new = h_box[i].clamp(h[i] - g / row_norm2[i]);
            let delta = new - h[i];
            if delta != 0.0 {
                resid.iter_mut().zip(row.iter()).for_each(|(r, a)| *r += col_scale * a * delta);
                rho += inv_n * y[i] * delta;
                h[i] = new;
                moved = moved.max(delta.abs());
            }
        }
        moved = moved.max(sweep_l1(&mut s, &s_box, &mut resid, lam1));
        moved = moved.max(sweep_tv(&mut q, &q_box, &rows, &mut resid, lam2));
        if moved <= opts.sweep_tol {
            break;
        }
    }

    let grad = hinge_grad(&h);
    if diff.is_chain() {
        // Hinge multipliers fixed, the chain part is solved exactly in the inf-norm.
        let (s2, q2) = chain_multipliers(&grad, &s_box, &q_box, lam1, lam2);
        let before = residual_inf(&grad, &s, &q, diff, lam1, lam2);
        let after = residual_inf(&grad, &s2, &q2, diff, lam1, lam2);
        if after <= before {
            s = s2;
            q = q2;
        }
    }
    Ok(assemble(problem, &grad, s, q, Some(h), rho.abs(), opts))
}

fn residual_inf(grad: &[f64], s: &[f64], q: &[f64], diff: &DiffOperator, lam1: f64, lam2: f64) -> f64 {
    let mut lt_q = vec![0.0; grad.len()];
    diff.apply_transpose_into(q, &mut lt_q);
    (0..grad.len())
        .map(|i| (grad[i] + lam1 * s[i] + lam2 * lt_q[i]).abs())
        .fold(0.0, f64::max)
}

fn assemble(
    problem: &FusedProblem,
    grad: &[f64],
    s: Vec<f64>,
    q: Vec<f64>,
    hinge: Option<Vec<f64>>,
    intercept: f64,
    opts: &KktOptions,
) -> KktReport {
    let (lam1, lam2) = (problem.lam1(), problem.lam2());
    let diff = problem.diff();
    let mut lt_q = vec![0.0; grad.len()];
    diff.apply_transpose_into(&q, &mut lt_q);
    let stationarity = residual_inf(grad, &s, &q, diff, lam1, lam2);
    let residual = stationarity.max(intercept);
    KktReport {
        residual_inf: residual,
        feasible_subgradient: residual <= opts.certify_tol,
        per_block: BlockResiduals {
            smooth: norm_inf(grad),
            l1: lam1 * norm_inf(&s),
            tv: lam2 * norm_inf(&lt_q),
            intercept,
        },
        l1_multiplier: s,
        tv_multiplier: q,
        hinge_multiplier: hinge,
    }
}

/// Exact inf-norm minimization for the chain operator.
///
/// Rows read `r_i = g_i + lam1 s_i + lam2 (q_{i-1} - q_i)` with `q_{-1} = q_{p-1} = 0`, so
/// for a target `eps` the reachable values of each `q_i` form an interval that can be
/// propagated left to right. Bisection on `eps` gives the optimum; a backward pass
/// recovers multipliers attaining it.
fn chain_multipliers(grad: &[f64], s_box: &[Bounds], q_box: &[Bounds], lam1: f64, lam2: f64) -> (Vec<f64>, Vec<f64>) {
    let p = grad.len();
    let mut reach = Vec::with_capacity(p.saturating_sub(1));
    let feasible = |eps: f64, reach: &mut Vec<Bounds>| -> bool {
        reach.clear();
        let mut q = Bounds::point(0.0);
        for i in 0..p {
            let step = Bounds {
                lo: (grad[i] + lam1 * s_box[i].lo - eps) / lam2,
                hi: (grad[i] + lam1 * s_box[i].hi + eps) / lam2,
            };
            let next = Bounds {
                lo: q.lo + step.lo,
                hi: q.hi + step.hi,
            };
            let target = if i + 1 < p { q_box[i] } else { Bounds::point(0.0) };
            match next.intersect(&target) {
                Some(b) => q = b,
                None => return false,
            }
            if i + 1 < p {
                reach.push(q);
            }
        }
        true
    };

    let mut hi = norm_inf(grad) + lam1 + 2.0 * lam2;
    let mut lo = 0.0;
    if feasible(0.0, &mut reach) {
        hi = 0.0;
    } else {
        // The upper end is always feasible: any admissible multipliers reach it.
        while !feasible(hi, &mut reach) {
            hi *= 2.0;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if feasible(mid, &mut reach) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
    }
    let eps = hi;
    let ok = feasible(eps, &mut reach);
    debug_assert!(ok);

    let mut s = vec![0.0; p];
    let mut q = vec![0.0; p.saturating_sub(1)];
    let mut q_next = 0.0;
    for i in (0..p).rev() {
        let prev = if i > 0 { reach[i - 1] } else { Bounds::point(0.0) };
        let window = Bounds {
            lo: q_next - (grad[i] + lam1 * s_box[i].hi + eps) / lam2,
            hi: q_next - (grad[i] + lam1 * s_box[i].lo - eps) / lam2,
        };
        let q_prev = match window.intersect(&prev) {
            Some(b) => 0.5 * (b.lo + b.hi),
            None => prev.clamp(0.5 * (window.lo + window.hi)),
        };
        let t = lam2 * (q_next - q_prev) - grad[i];
        s[i] = s_box[i].clamp(t / lam1);
        if i > 0 {
            q[i - 1] = q_prev;
        }
        q_next = q_prev;
    }
    (s, q)
}

fn row_lists(diff: &DiffOperator) -> Vec<Vec<(usize, f64)>> {
    let mut rows = vec![Vec::new(); diff.m()];
    for (r, c, v) in diff.entries() {
        rows[r].push((c, v));
    }
    rows
}

fn sweep_l1(s: &mut [f64], s_box: &[Bounds], resid: &mut [f64], lam1: f64) -> f64 {
    let mut moved = 0.0_f64;
    for i in 0..s.len() {
        if !s_box[i].is_free() {
            continue;
        }
        let new = s_box[i].clamp(s[i] - resid[i] / lam1);
        let delta = new - s[i];
        resid[i] += lam1 * delta;
        s[i] = new;
        moved = moved.max(delta.abs());
    }
    moved
}

fn sweep_tv(q: &mut [f64], q_box: &[Bounds], rows: &[Vec<(usize, f64)>], resid: &mut [f64], lam2: f64) -> f64 {
    let mut moved = 0.0_f64;
    for j in 0..q.len() {
        if !q_box[j].is_free() {
            continue;
        }
        let norm2: f64 = rows[j].iter().map(|(_, v)| v * v).sum::<f64>() * lam2 * lam2;
        if norm2 == 0.0 {
            continue;
        }
        let g: f64 = lam2 * rows[j].iter().map(|&(c, v)| v * resid[c]).sum::<f64>();
        let new = q_box[j].clamp(q[j] - g / norm2);
        let delta = new - q[j];
        if delta != 0.0 {
            for &(c, v) in &rows[j] {
                resid[c] += lam2 * v * delta;
            }
            q[j] = new;
            moved = moved.max(delta.abs());
        }
    }
    moved
}

/// Projected coordinate descent on `0.5 ||g + lam1 s + lam2 L^T q||^2` for general operators.
fn general_multipliers(
    grad: &[f64],
    s_box: &[Bounds],
    q_box: &[Bounds],
    diff: &DiffOperator,
    lam1: f64,
    lam2: f64,
    opts: &KktOptions,
) -> (Vec<f64>, Vec<f64>) {
    let rows = row_lists(diff);
    let mut s: Vec<f64> = grad
        .iter()
        .zip(s_box)
        .map(|(g, b)| b.clamp(-g / lam1))
        .collect();
    let mut q: Vec<f64> = q_box.iter().map(|b| b.clamp(0.0)).collect();
    let mut resid = vec![0.0; grad.len()];
    diff.apply_transpose_into(&q, &mut resid);
    for i in 0..grad.len() {
        resid[i] = grad[i] + lam1 * s[i] + lam2 * resid[i];
    }
    for _ in 0..opts.max_sweeps {
        let moved = sweep_l1(&mut s, s_box, &mut resid, lam1).max(sweep_tv(&mut q, q_box, &rows, &mut resid, lam2));
        if moved <= opts.sweep_tol {
            break;
        }
    }
    (s, q)
}
