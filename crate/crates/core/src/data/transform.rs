use ndarray::Array2;
use rand::seq::SliceRandom;

use super::{synth::rng_from_seed, Dataset};
use crate::error::{check_len, Error, Result};

/// Column statistics recorded by [`standardize`], for applying to held-out data.
#[derive(Debug, Clone, PartialEq)]
pub struct Transform {
    pub x_mean: Vec<f64>,
    pub x_scale: Vec<f64>,
    /// `(mean, scale)` of a continuous response.
    pub y: Option<(f64, f64)>,
    /// Columns with zero variance; they are mapped to all zeros.
    pub zero_variance: Vec<usize>,
}

impl Transform {
    pub fn apply_x(&self, x: &Array2<f64>) -> Result<Array2<f64>> {
        check_len("columns", self.x_mean.len(), x.ncols())?;
        let mut out = x.clone();
        for (j, mut col) in out.columns_mut().into_iter().enumerate() {
            let (m, s) = (self.x_mean[j], self.x_scale[j]);
            col.iter_mut().for_each(|v| *v = if s == 0.0 { 0.0 } else { (*v - m) / s });
        }
        Ok(out)
    }

    pub fn apply_y(&self, y: &[f64]) -> Vec<f64> {
        match self.y {
            Some((m, s)) if s > 0.0 => y.iter().map(|v| (v - m) / s).collect(),
            Some((m, _)) => y.iter().map(|v| v - m).collect(),
            None => y.to_vec(),
        }
    }

    /// Maps a standardized-scale prediction back to the response scale.
    pub fn invert_y(&self, y: &[f64]) -> Vec<f64> {
        match self.y {
            Some((m, s)) if s > 0.0 => y.iter().map(|v| v * s + m).collect(),
            Some((m, _)) => y.iter().map(|v| v + m).collect(),
            None => y.to_vec(),
        }
    }
}

fn mean_and_sd<'a>(values: impl Iterator<Item = &'a f64> + Clone, n: usize) -> (f64, f64) {
    let nf = n as f64;
    let mean = values.clone().sum::<f64>() / nf;
    let var = values.map(|v| (v - mean).powi(2)).sum::<f64>() / nf;
    (mean, var.sqrt())
}

/// Centers columns of `x` (and a continuous `y`) and scales them to unit population variance.
///
/// Zero-variance columns come back as zeros, are listed in the transform, and leave
/// the result flagged as not standardized.
pub fn standardize(ds: &Dataset) -> Result<(Dataset, Transform)> {
    let mut out = ds.clone();
    let mut transform = Transform {
        x_mean: Vec::new(),
        x_scale: Vec::new(),
        y: None,
        zero_variance: Vec::new(),
    };
    if let Some(x) = &ds.x {
        if x.nrows() == 0 {
            return Err(Error::InvalidParameter("cannot standardize an empty matrix".into()));
        }
        for (j, col) in x.columns().into_iter().enumerate() {
            let (m, s) = mean_and_sd(col.iter(), x.nrows());
            transform.x_mean.push(m);
            if s > 0.0 {
                transform.x_scale.push(s);
            } else {
                transform.x_scale.push(0.0);
                transform.zero_variance.push(j);
            }
        }
        out.x = Some(transform.apply_x(x)?);
    }
    if !ds.labels && !ds.y.is_empty() {
        let (m, s) = mean_and_sd(ds.y.iter(), ds.y.len());
        transform.y = Some((m, s));
        if s == 0.0 {
            log::warn!("response has zero variance");
        }
        out.y = transform.apply_y(&ds.y);
    }
    if !transform.zero_variance.is_empty() {
        log::warn!("{} zero-variance column(s) set to zero", transform.zero_variance.len());
    }
    out.standardized = transform.zero_variance.is_empty() && transform.y.is_none_or(|(_, s)| s > 0.0);
    Ok((out, transform))
}

/// Fold assignment for k-fold cross-validation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoldPlan {
    pub k: usize,
    pub assignments: Vec<usize>,
}

impl FoldPlan {
    pub fn test_indices(&self, fold: usize) -> Vec<usize> {
        (0..self.assignments.len()).filter(|&i| self.assignments[i] == fold).collect()
    }

    pub fn train_indices(&self, fold: usize) -> Vec<usize> {
        (0..self.assignments.len()).filter(|&i| self.assignments[i] != fold).collect()
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut s = vec![0; self.k];
        self.assignments.iter().for_each(|&f| s[f] += 1);
        s
    }
}

/// Shuffled balanced fold assignment.
pub fn kfold(n: usize, k: usize, seed: u64) -> Result<FoldPlan> {
    if k < 2 || n < k {
        return Err(Error::InvalidParameter(format!("k-fold needs n >= k >= 2, got n={n}, k={k}")));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng_from_seed(seed));
    let mut assignments = vec![0; n];
    for (pos, &i) in order.iter().enumerate() {
        assignments[i] = pos % k;
    }
    Ok(FoldPlan { k, assignments })
}
