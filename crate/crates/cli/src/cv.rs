use fusedbregman::data::{self, Dataset};
use fusedbregman::linalg::matvec;
use fusedbregman::solve_uncertified;
use rayon::prelude::*;

use crate::args::{CvArgs, Kind};
use crate::input::{build_problem, ensure_dir, load_dataset, solver_config, write_lines};
use crate::record::{to_line, CvRecord, CV_SCHEMA};
use crate::{command_line, CliResult, Status};

struct FoldResult {
    grid: usize,
    fold: usize,
    test_size: usize,
    /// Sum of squared errors (regression) or misclassification count (svm).
    loss: f64,
    iterations: usize,
    converged: bool,
}

/// Standardizes on the training rows and maps the test rows with the same transform.
fn split(ds: &Dataset, train: &[usize], test: &[usize], standardize: bool) -> CliResult<(Dataset, Dataset, Option<data::Transform>)> {
    let (mut tr, mut te) = (ds.subset(train), ds.subset(test));
    if !standardize {
        return Ok((tr, te, None));
    }
    let (std_tr, t) = data::standardize(&tr)?;
    te.x = match &te.x {
        Some(x) => Some(t.apply_x(x)?),
        None => None,
    };
    tr = std_tr;
    Ok((tr, te, Some(t)))
}

fn fold_loss(kind: Kind, test: &Dataset, coef: &[f64], intercept: f64, transform: Option<&data::Transform>) -> f64 {
    let x = test.x.as_ref().expect("cv needs a design");
    let mut f = vec![0.0; x.nrows()];
    matvec(x, coef, &mut f);
    match kind {
        Kind::Svm => f
            .iter()
            .zip(&test.y)
            .filter(|(fi, yi)| (**fi + intercept) * **yi <= 0.0)
            .count() as f64,
        _ => {
            let pred = match transform {
                Some(t) => t.invert_y(&f),
                None => f,
            };
            pred.iter().zip(&test.y).map(|(a, b)| (a - b).powi(2)).sum()
        }
    }
}

pub fn run(args: &CvArgs) -> CliResult<Status> {
    let kind = args.input.kind;
    if kind == Kind::Flsa {
        return Err("cross-validation needs a design matrix (regression or svm)".into());
    }
    // Standardization is fitted per training fold, not on the whole set.
    let ds = load_dataset(&crate::args::InputArgs { standardize: false, ..args.input.clone() })?;
    let n = ds.n();
    if args.folds > n {
        return Err(format!("--folds {} exceeds the {n} observations", args.folds).into());
    }
    let plan = data::kfold(n, args.folds, args.seed.seed)?;
    let config = solver_config(&args.solver)?;
    for &l in args.lam1.iter().chain(&args.lam2) {
        if l.is_nan() || l <= 0.0 {
            return Err(format!("penalties must be positive, got {l}").into());
        }
    }
    let grid: Vec<(f64, f64)> = args
        .lam1
        .iter()
        .flat_map(|&a| args.lam2.iter().map(move |&b| (a, b)))
        .collect();
    let tasks: Vec<(usize, usize)> = (0..grid.len())
        .flat_map(|g| (0..args.folds).map(move |f| (g, f)))
        .collect();

    let pool = rayon::ThreadPoolBuilder::new().num_threads(args.jobs.max(1)).build()?;
    let results: Vec<Result<FoldResult, String>> = pool.install(|| {
        tasks
            .par_iter()
            .map(|&(g, fold)| {
                let (tr, te, t) = split(&ds, &plan.train_indices(fold), &plan.test_indices(fold), args.input.standardize)
                    .map_err(|e| e.to_string())?;
                let problem = build_problem(&tr, kind, grid[g].0, grid[g].1).map_err(|e| e.to_string())?;
                let sol = solve_uncertified(&problem, &config).map_err(|e| e.to_string())?;
                Ok(FoldResult {
                    grid: g,
                    fold,
                    test_size: te.n(),
                    loss: fold_loss(kind, &te, &sol.coef, sol.intercept.unwrap_or(0.0), t.as_ref()),
                    iterations: sol.iterations,
                    converged: sol.converged,
                })
            })
            .collect()
    });
    let results = results.into_iter().collect::<Result<Vec<_>, _>>()?;

    let command = command_line();
    let kind_name = fusedbregman::ProblemKind::from(kind).as_str();
    let record = |g: usize, fold: Option<usize>, size: usize, loss: f64, iterations: usize, converged: bool| CvRecord {
        schema: CV_SCHEMA,
        command: command.clone(),
        kind: kind_name,
        lam1: grid[g].0,
        lam2: grid[g].1,
        fold,
        folds: args.folds,
        test_size: size,
        test_error: loss / size as f64,
        errors: (kind == Kind::Svm).then(|| format!("{}/{size}", loss as usize)),
        iterations,
        converged,
    };
    let mut lines = Vec::new();
    for g in 0..grid.len() {
        let folds: Vec<&FoldResult> = results.iter().filter(|r| r.grid == g).collect();
        for r in &folds {
            lines.push(to_line(&record(g, Some(r.fold), r.test_size, r.loss, r.iterations, r.converged)));
        }
        let size = folds.iter().map(|r| r.test_size).sum();
        let loss = folds.iter().map(|r| r.loss).sum();
        let iterations = folds.iter().map(|r| r.iterations).sum();
        let converged = folds.iter().all(|r| r.converged);
        lines.push(to_line(&record(g, None, size, loss, iterations, converged)));
    }
    if let Some(out) = &args.out {
        ensure_dir(out)?;
        write_lines(&out.join("cv.jsonl"), &lines)?;
    }
    for l in &lines {
        println!("{l}");
    }
    Ok(Status::from_all(results.iter().map(|r| r.converged)))
}
