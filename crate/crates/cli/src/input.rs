use std::fs;
use std::path::Path;

use fusedbregman::data::{self, Dataset};
use fusedbregman::{FusedProblem, ProblemKind, SolverConfig};

use crate::args::{InputArgs, Kind, Mu, SolverArgs};
use crate::CliResult;

fn at(path: &Path, e: fusedbregman::Error) -> String {
    format!("{}: {e}", path.display())
}

/// Reads the dataset described by the input flags.
pub fn load_dataset(input: &InputArgs) -> CliResult<Dataset> {
    let header = input.header;
    let mut ds = if let Some(path) = &input.data {
        let ds = data::load_csv(path, header, input.response.as_ref()).map_err(|e| at(path, e))?;
        if input.kind == Kind::Flsa && ds.x.is_some() {
            return Err("flsa input must be a single signal column".into());
        }
        ds
    } else if input.kind == Kind::Flsa {
        let path = input
            .signal
            .as_ref()
            .or(input.y.as_ref())
            .ok_or("flsa needs --signal (or --data)")?;
        Dataset::signal(data::read_vector(path, header).map_err(|e| at(path, e))?)
    } else {
        let (Some(xp), Some(yp)) = (&input.x, &input.y) else {
            return Err("regression and svm need --x and --y (or --data with --response)".into());
        };
        let (x, names) = data::read_matrix(xp, header).map_err(|e| at(xp, e))?;
        let y = data::read_vector(yp, header).map_err(|e| at(yp, e))?;
        if x.nrows() != y.len() {
            return Err(format!("--x has {} rows but --y has {} values", x.nrows(), y.len()).into());
        }
        Dataset {
            x: Some(x),
            y,
            feature_names: names,
            standardized: false,
            labels: false,
        }
    };
    ds.labels = input.kind == Kind::Svm;
    if ds.y.is_empty() {
        return Err("input has no data rows".into());
    }
    if input.standardize {
        ds = data::standardize(&ds)?.0;
    }
    Ok(ds)
}

pub fn build_problem(ds: &Dataset, kind: Kind, lam1: f64, lam2: f64) -> CliResult<FusedProblem> {
    let y = ds.y.clone();
    let problem = match ProblemKind::from(kind) {
        ProblemKind::Flsa => FusedProblem::flsa(y, lam1, lam2)?,
        ProblemKind::Regression => {
            FusedProblem::regression(ds.x.clone().ok_or("missing design matrix")?, y, lam1, lam2)?
        }
        ProblemKind::Svm => FusedProblem::svm(ds.x.clone().ok_or("missing design matrix")?, y, lam1, lam2)?,
    };
    Ok(problem)
}

pub fn solver_config(args: &SolverArgs) -> CliResult<SolverConfig> {
    let base = match args.mu {
        Mu::Auto => SolverConfig::auto(),
        Mu::Value(v) => SolverConfig::with_mu(v),
    };
    let config = base.mu3(args.mu3).rel_tol(args.tol).max_iter(args.max_iter);
    config.validate(true)?;
    Ok(config)
}

pub fn ensure_dir(path: &Path) -> CliResult<()> {
    fs::create_dir_all(path).map_err(|e| format!("cannot create {}: {e}", path.display()))?;
    Ok(())
}

pub fn write_lines(path: &Path, lines: &[String]) -> CliResult<()> {
    let mut text = lines.join("\n");
    text.push('\n');
    fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
    Ok(())
}
