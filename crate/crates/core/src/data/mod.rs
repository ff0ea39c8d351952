//! Synthetic problem generation, CSV ingestion, standardization and fold plans.

mod csv_io;
mod synth;
mod transform;

use ndarray::Array2;

pub use csv_io::{load_csv, read_matrix, read_vector, write_matrix, write_vector, Column};
pub use synth::{
    default_beta, flsa_truth, gen_equicorrelated, gen_flsa_signal, gen_regression, gen_two_class,
    rng_from_seed, DEFAULT_FLSA_SIGMA, DEFAULT_REGRESSION_SIGMA,
};
pub use transform::{kfold, standardize, FoldPlan, Transform};

/// A design matrix (absent for pure signals) with its responses or labels.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub x: Option<Array2<f64>>,
    pub y: Vec<f64>,
    pub feature_names: Option<Vec<String>>,
    /// Columns of `x` (and `y`, for continuous responses) have mean 0 and unit variance.
    pub standardized: bool,
    /// `y` holds class labels in {-1, +1}; labels are never standardized.
    pub labels: bool,
}

impl Dataset {
    pub fn signal(y: Vec<f64>) -> Self {
        Self {
            x: None,
            y,
            feature_names: None,
            standardized: false,
            labels: false,
        }
    }

    pub fn n(&self) -> usize {
        match &self.x {
            Some(x) => x.nrows(),
            None => self.y.len(),
        }
    }

    pub fn p(&self) -> usize {
        match &self.x {
            Some(x) => x.ncols(),
            None => self.y.len(),
        }
    }

    /// Rows selected by `idx`, in order.
    pub fn subset(&self, idx: &[usize]) -> Dataset {
        let x = self.x.as_ref().map(|x| x.select(ndarray::Axis(0), idx));
        let y = if self.y.is_empty() {
            Vec::new()
        } else {
            idx.iter().map(|&i| self.y[i]).collect()
        };
        Dataset {
            x,
            y,
            feature_names: self.feature_names.clone(),
            standardized: false,
            labels: self.labels,
        }
    }
}
