use serde::Serialize;

pub const RUN_SCHEMA: &str = "fusedbregman.run/1";
pub const CV_SCHEMA: &str = "fusedbregman.cv/1";

/// One solver run. Unknown values serialize as `null`; no field is ever omitted.
#[derive(Debug, Clone, Serialize)]
pub struct RunRecord {
    pub schema: &'static str,
    pub command: String,
    pub kind: &'static str,
    pub n: usize,
    pub p: usize,
    pub rho: Option<f64>,
    pub lam1: f64,
    pub lam2: f64,
    pub mu1: f64,
    pub mu2: f64,
    pub mu3: Option<f64>,
    pub iterations: usize,
    pub wall_time_s: f64,
    pub objective: f64,
    pub rel_e: f64,
    pub kkt_residual: Option<f64>,
    pub gap_beta_a: f64,
    pub gap_lbeta_b: f64,
    pub gap_hinge: Option<f64>,
    pub intercept: Option<f64>,
    pub nonzeros: usize,
    pub converged: bool,
}

/// Test error of one fold (`fold` set) or the aggregate over folds (`fold` null).
#[derive(Debug, Clone, Serialize)]
pub struct CvRecord {
    pub schema: &'static str,
    pub command: String,
    pub kind: &'static str,
    pub lam1: f64,
    pub lam2: f64,
    pub fold: Option<usize>,
    pub folds: usize,
    pub test_size: usize,
    /// Mean squared test error (regression) or misclassification rate (svm).
    pub test_error: f64,
    /// `"misclassified/total"` (svm only).
    pub errors: Option<String>,
    pub iterations: usize,
    pub converged: bool,
}

pub fn to_line<T: Serialize>(record: &T) -> String {
    serde_json::to_string(record).expect("records serialize")
}
