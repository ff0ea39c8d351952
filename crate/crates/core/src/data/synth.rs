use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{standardize, Dataset};
use crate::error::{check_len, Error, Result};
use crate::linalg::matvec;

pub const DEFAULT_REGRESSION_SIGMA: f64 = 1.0;
pub const DEFAULT_FLSA_SIGMA: f64 = 0.5;

const PATTERN_LEN: usize = 125;
const TILE: usize = 500;

/// The generator used throughout: ChaCha8 seeded from a 64-bit integer.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn normal(rng: &mut ChaCha8Rng) -> f64 {
    rng.sample(StandardNormal)
}

/// Equicorrelated Gaussian design, `X_j = sqrt(rho) Z_0 + sqrt(1 - rho) Z_j`, column-standardized.
pub fn gen_equicorrelated(n: usize, p: usize, rho: f64, seed: u64) -> Result<Dataset> {
    if n == 0 || p == 0 {
        return Err(Error::InvalidParameter("n and p must be at least 1".into()));
    }
    if !(0.0..1.0).contains(&rho) {
        return Err(Error::InvalidParameter(format!("rho must lie in [0, 1), got {rho}")));
    }
    let mut rng = rng_from_seed(seed);
    let (common, own) = (rho.sqrt(), (1.0 - rho).sqrt());
    let mut x = Array2::zeros((n, p));
    for mut row in x.rows_mut() {
        let z0 = normal(&mut rng);
        for v in row.iter_mut() {
            *v = common * z0 + own * normal(&mut rng);
        }
    }
    let ds = Dataset {
        x: Some(x),
        y: Vec::new(),
        feature_names: None,
        standardized: false,
        labels: false,
    };
    Ok(standardize(&ds)?.0)
}

/// Piecewise-constant coefficient pattern: 2 on 1..=20 and 121..=125, 3 at 41, 1 on 71..=85 (1-based).
pub fn default_beta(p: usize) -> Result<Vec<f64>> {
    if p < PATTERN_LEN {
        return Err(Error::InvalidParameter(format!(
            "the coefficient pattern needs p >= {PATTERN_LEN}, got {p}"
        )));
    }
    let mut beta = vec![0.0; p];
    beta[0..20].iter_mut().for_each(|b| *b = 2.0);
    beta[120..125].iter_mut().for_each(|b| *b = 2.0);
    beta[40] = 3.0;
    beta[70..85].iter_mut().for_each(|b| *b = 1.0);
    Ok(beta)
}

/// `y = X beta + sigma * eps` with standard Gaussian `eps`.
pub fn gen_regression(x: &Array2<f64>, beta: &[f64], sigma: f64, seed: u64) -> Result<Vec<f64>> {
    check_len("coefficients", x.ncols(), beta.len())?;
    if !(sigma >= 0.0) {
        return Err(Error::InvalidParameter(format!("sigma must be non-negative, got {sigma}")));
    }
    let mut y = vec![0.0; x.nrows()];
    matvec(x, beta, &mut y);
    let mut rng = rng_from_seed(seed);
    for v in y.iter_mut() {
        *v += sigma * normal(&mut rng);
    }
    Ok(y)
}

/// Noise-free signal: the coefficient pattern repeated every 500 coordinates.
pub fn flsa_truth(p: usize) -> Result<Vec<f64>> {
    if p < PATTERN_LEN {
        return default_beta(p);
    }
    let base = default_beta(TILE)?;
    Ok((0..p).map(|j| base[j % TILE]).collect())
}

/// [`flsa_truth`] plus `sigma`-scaled Gaussian noise.
pub fn gen_flsa_signal(p: usize, sigma: f64, seed: u64) -> Result<Vec<f64>> {
    if !(sigma >= 0.0) {
        return Err(Error::InvalidParameter(format!("sigma must be non-negative, got {sigma}")));
    }
    let mut y = flsa_truth(p)?;
    let mut rng = rng_from_seed(seed);
    for v in y.iter_mut() {
        *v += sigma * normal(&mut rng);
    }
    Ok(y)
}

/// Two standard Gaussian clouds whose means differ by `separation` along the
/// normalized coefficient pattern (the first axis when `p < 125`).
///
/// The first `n / 2` rows are labelled +1 and the rest -1.
pub fn gen_two_class(n: usize, p: usize, separation: f64, seed: u64) -> Result<Dataset> {
    if n == 0 || !n.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!("n must be even and positive, got {n}")));
    }
    if p == 0 {
        return Err(Error::InvalidParameter("p must be at least 1".into()));
    }
    let direction = if p >= PATTERN_LEN {
        let b = default_beta(p)?;
        let norm = b.iter().map(|v| v * v).sum::<f64>().sqrt();
        b.into_iter().map(|v| v / norm).collect()
    } else {
        let mut d = vec![0.0; p];
        d[0] = 1.0;
        d
    };
    let y: Vec<f64> = (0..n).map(|i| if i < n / 2 { 1.0 } else { -1.0 }).collect();
    let mut rng = rng_from_seed(seed);
    let mut x = Array2::zeros((n, p));
    for (mut row, &label) in x.rows_mut().into_iter().zip(&y) {
        for (v, d) in row.iter_mut().zip(&direction) {
            *v = normal(&mut rng) + 0.5 * label * separation * d;
        }
    }
    Ok(Dataset {
        x: Some(x),
        y,
        feature_names: None,
        standardized: false,
        labels: true,
    })
}
