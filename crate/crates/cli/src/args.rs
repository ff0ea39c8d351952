use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fusedbregman::data::Column;
use fusedbregman::ProblemKind;

#[derive(Debug, Parser)]
#[command(name = "fusedbregman", version, about = "Split Bregman solvers for the fused Lasso family")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a synthetic problem to CSV files.
    Generate(GenerateArgs),
    /// Solve one problem and write its coefficients and a run record.
    Solve(SolveArgs),
    /// K-fold cross-validation over a (lam1, lam2) grid.
    Cv(CvArgs),
    /// Timing sweep over problem sizes and a (lam1, lam2) grid.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Regression,
    Flsa,
    Svm,
}

impl From<Kind> for ProblemKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Regression => ProblemKind::Regression,
            Kind::Flsa => ProblemKind::Flsa,
            Kind::Svm => ProblemKind::Svm,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Mu {
    Auto,
    Value(f64),
}

impl FromStr for Mu {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(Mu::Auto);
        }
        match s.parse::<f64>() {
            Ok(v) if v > 0.0 && v.is_finite() => Ok(Mu::Value(v)),
            _ => Err(format!("expected 'auto' or a positive number, got '{s}'")),
        }
    }
}

#[derive(Debug, Args)]
pub struct SeedArgs {
    /// Random seed.
    #[arg(long, env = "FB_SEED", default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long, value_enum)]
    pub kind: Kind,
    #[arg(long, default_value_t = 100)]
    pub n: usize,
    #[arg(long, default_value_t = 500)]
    pub p: usize,
    /// Pairwise predictor correlation.
    #[arg(long, default_value_t = 0.0)]
    pub rho: f64,
    /// Noise standard deviation (default 1 for regression, 0.5 for flsa).
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Distance between class means (svm).
    #[arg(long, default_value_t = 2.0)]
    pub separation: f64,
    #[command(flatten)]
    pub seed: SeedArgs,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct InputArgs {
    #[arg(long, value_enum)]
    pub kind: Kind,
    /// Design matrix CSV (regression, svm).
    #[arg(long)]
    pub x: Option<PathBuf>,
    /// Response or label CSV, one value per row.
    #[arg(long)]
    pub y: Option<PathBuf>,
    /// Signal CSV, one value per row (flsa).
    #[arg(long)]
    pub signal: Option<PathBuf>,
    /// Single CSV holding the design and the response column.
    #[arg(long, conflicts_with_all = ["x", "y", "signal"])]
    pub data: Option<PathBuf>,
    /// Response column of --data, by header name or 0-based index.
    #[arg(long, requires = "data")]
    pub response: Option<Column>,
    /// Input files start with a header line.
    #[arg(long)]
    pub header: bool,
    /// Standardize columns (and a continuous response) before solving.
    #[arg(long)]
    pub standardize: bool,
}

#[derive(Debug, Args)]
pub struct SolverArgs {
    /// Augmentation weight for mu1 = mu2, or 'auto' for pretrial selection.
    #[arg(long, default_value = "auto")]
    pub mu: Mu,
    /// Hinge augmentation weight (svm).
    #[arg(long, default_value_t = 1.0)]
    pub mu3: f64,
    /// Relative objective change that stops the iteration.
    #[arg(long, default_value_t = 1e-5)]
    pub tol: f64,
    #[arg(long, default_value_t = 50_000)]
    pub max_iter: usize,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long)]
    pub lam1: f64,
    #[arg(long)]
    pub lam2: f64,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Directory for coef.csv and records.jsonl.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CvArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// lam1 grid values (repeatable, or comma separated).
    #[arg(long, required = true, num_args = 1.., value_delimiter = ',')]
    pub lam1: Vec<f64>,
    /// lam2 grid values (repeatable, or comma separated).
    #[arg(long, required = true, num_args = 1.., value_delimiter = ',')]
    pub lam2: Vec<f64>,
    #[arg(long, default_value_t = 10)]
    pub folds: usize,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[command(flatten)]
    pub seed: SeedArgs,
    /// Worker threads for independent solves.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// Directory for cv.jsonl.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, value_enum, default_value = "regression")]
    pub kind: Kind,
    /// Sample sizes (ignored for flsa).
    #[arg(long, num_args = 1.., value_delimiter = ',', default_value = "200")]
    pub n: Vec<usize>,
    #[arg(long, num_args = 1.., value_delimiter = ',', default_value = "1000,2000,4000,8000")]
    pub p: Vec<usize>,
    #[arg(long, num_args = 1.., value_delimiter = ',', default_value = "0")]
    pub rho: Vec<f64>,
    #[arg(long, num_args = 1.., value_delimiter = ',', default_value = "16")]
    pub lam1: Vec<f64>,
    #[arg(long, num_args = 1.., value_delimiter = ',', default_value = "20")]
    pub lam2: Vec<f64>,
    /// Independent data draws per cell.
    #[arg(long, default_value_t = 1)]
    pub repeats: usize,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[command(flatten)]
    pub seed: SeedArgs,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// Directory for bench.csv and scaling.csv.
    #[arg(long)]
    pub out: PathBuf,
}
