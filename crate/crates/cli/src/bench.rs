use std::time::Instant;

use fusedbregman::data;
use fusedbregman::{solve_uncertified, FusedProblem, SolverConfig};
use rayon::prelude::*;
use serde_json::json;

use crate::args::{BenchArgs, Kind};
use crate::input::{ensure_dir, solver_config, write_lines};
use crate::{CliResult, Status};

#[derive(Debug, Clone, Copy)]
struct Cell {
    n: usize,
    p: usize,
    rho: Option<f64>,
}

struct Timing {
    secs: f64,
    iterations: usize,
    converged: bool,
}

fn method(kind: Kind) -> &'static str {
    match kind {
        Kind::Regression => "SBFLasso",
        Kind::Flsa => "SBFLSA",
        Kind::Svm => "SBFLSVM",
    }
}

fn cell_problems(kind: Kind, cell: Cell, seed: u64, grid: &[(f64, f64)]) -> CliResult<Vec<FusedProblem>> {
    let (lam1, lam2) = grid[0];
    let base = match kind {
        Kind::Regression => {
            let x = data::gen_equicorrelated(cell.n, cell.p, cell.rho.unwrap_or(0.0), seed)?.x.expect("design");
            let beta = data::default_beta(cell.p)?;
            let y = data::gen_regression(&x, &beta, data::DEFAULT_REGRESSION_SIGMA, seed.wrapping_add(1))?;
            FusedProblem::regression(x, y, lam1, lam2)?
        }
        Kind::Flsa => FusedProblem::flsa(data::gen_flsa_signal(cell.p, data::DEFAULT_FLSA_SIGMA, seed)?, lam1, lam2)?,
        Kind::Svm => {
            let ds = data::gen_two_class(cell.n, cell.p, 2.0, seed)?;
            FusedProblem::svm(ds.x.expect("design"), ds.y, lam1, lam2)?
        }
    };
    grid.iter()
        .map(|&(a, b)| base.with_lambdas(a, b).map_err(Into::into))
        .collect()
}

fn time_one(problem: &FusedProblem, config: &SolverConfig) -> Result<Timing, String> {
    let start = Instant::now();
    let sol = solve_uncertified(problem, config).map_err(|e| e.to_string())?;
    Ok(Timing {
        secs: start.elapsed().as_secs_f64(),
        iterations: sol.iterations,
        converged: sol.converged,
    })
}

/// Least-squares slope of `ln time` against `ln p`.
fn loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let k = points.len() as f64;
    let mx = points.iter().map(|(x, _)| x.ln()).sum::<f64>() / k;
    let my = points.iter().map(|(_, y)| y.ln()).sum::<f64>() / k;
    let num: f64 = points.iter().map(|(x, y)| (x.ln() - mx) * (y.ln() - my)).sum();
    let den: f64 = points.iter().map(|(x, _)| (x.ln() - mx).powi(2)).sum();
    (den > 0.0).then(|| num / den)
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or(String::new(), |v| v.to_string())
}

pub fn run(args: &BenchArgs) -> CliResult<Status> {
    let config = solver_config(&args.solver)?;
    if args.repeats == 0 {
        return Err("--repeats must be at least 1".into());
    }
    let grid: Vec<(f64, f64)> = args
        .lam1
        .iter()
        .flat_map(|&a| args.lam2.iter().map(move |&b| (a, b)))
        .collect();
    let mut cells = Vec::new();
    for &p in &args.p {
        match args.kind {
            Kind::Flsa => cells.push(Cell { n: p, p, rho: None }),
            _ => {
                for &n in &args.n {
                    for &rho in &args.rho {
                        let rho = (args.kind == Kind::Regression).then_some(rho);
                        cells.push(Cell { n, p, rho });
                    }
                }
            }
        }
    }
    // Instances are built up front so invalid sizes fail before anything is timed.
    let mut tasks = Vec::new();
    for (c, &cell) in cells.iter().enumerate() {
        for r in 0..args.repeats {
            let seed = args.seed.seed.wrapping_add(r as u64);
            for problem in cell_problems(args.kind, cell, seed, &grid)? {
                tasks.push((c, problem));
            }
        }
    }
    let pool = rayon::ThreadPoolBuilder::new().num_threads(args.jobs.max(1)).build()?;
    let timings: Vec<Result<Timing, String>> =
        pool.install(|| tasks.par_iter().map(|(_, problem)| time_one(problem, &config)).collect());
    let timings = timings.into_iter().collect::<Result<Vec<_>, _>>()?;

    let name = method(args.kind);
    let mut rows = vec!["method,n,p,rho,mean_time_s,mean_iters".to_string()];
    let mut means = Vec::new();
    for (c, cell) in cells.iter().enumerate() {
        let runs: Vec<&Timing> = tasks.iter().zip(&timings).filter(|((i, _), _)| *i == c).map(|(_, t)| t).collect();
        let count = runs.len() as f64;
        let time = runs.iter().map(|t| t.secs).sum::<f64>() / count;
        let iters = runs.iter().map(|t| t.iterations as f64).sum::<f64>() / count;
        rows.push(format!("{name},{},{},{},{time},{iters}", cell.n, cell.p, fmt_opt(cell.rho)));
        means.push((*cell, time));
    }

    let mut series = vec!["method,n,rho,p,mean_time_s".to_string()];
    let mut summaries = Vec::new();
    let mut groups: Vec<(usize, Option<f64>)> = Vec::new();
    for (cell, _) in &means {
        let key = (if args.kind == Kind::Flsa { 0 } else { cell.n }, cell.rho);
        if !groups.contains(&key) {
            groups.push(key);
        }
    }
    for (n, rho) in groups {
        let mut points: Vec<(Cell, f64)> = means
            .iter()
            .filter(|(c, _)| (if args.kind == Kind::Flsa { 0 } else { c.n }) == n && c.rho == rho)
            .cloned()
            .collect();
        points.sort_by_key(|(c, _)| c.p);
        for (c, t) in &points {
            series.push(format!("{name},{},{},{},{t}", c.n, fmt_opt(c.rho), c.p));
        }
        let xy: Vec<(f64, f64)> = points.iter().map(|(c, t)| (c.p as f64, *t)).collect();
        summaries.push(json!({
            "schema": "fusedbregman.bench/1",
            "method": name,
            "n": (args.kind != Kind::Flsa).then_some(n),
            "rho": rho,
            "slope_p": loglog_slope(&xy),
        }));
    }

    ensure_dir(&args.out)?;
    write_lines(&args.out.join("bench.csv"), &rows)?;
    write_lines(&args.out.join("scaling.csv"), &series)?;
    for s in &summaries {
        println!("{s}");
    }
    Ok(Status::from_all(timings.iter().map(|t| t.converged)))
}
