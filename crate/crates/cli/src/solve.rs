use std::time::Instant;

use fusedbregman::data::write_vector;
use fusedbregman::{certify, solve_uncertified, FusedProblem, Solution};

use crate::args::SolveArgs;
use crate::input::{build_problem, ensure_dir, load_dataset, solver_config, write_lines};
use crate::record::{to_line, RunRecord, RUN_SCHEMA};
use crate::{command_line, CliResult, Status};

/// Solves and certifies; the reported time covers the solve (including any pretrial) only.
pub fn timed_solve(problem: &FusedProblem, config: &fusedbregman::SolverConfig) -> CliResult<(Solution, f64)> {
    let start = Instant::now();
    let mut sol = solve_uncertified(problem, config)?;
    let secs = start.elapsed().as_secs_f64();
    certify(problem, &mut sol)?;
    Ok((sol, secs))
}

pub fn run_record(problem: &FusedProblem, sol: &Solution, secs: f64, rho: Option<f64>) -> RunRecord {
    RunRecord {
        schema: RUN_SCHEMA,
        command: command_line(),
        kind: problem.kind().as_str(),
        n: problem.n(),
        p: problem.p(),
        rho,
        lam1: problem.lam1(),
        lam2: problem.lam2(),
        mu1: sol.mu.0,
        mu2: sol.mu.1,
        mu3: sol.mu.2,
        iterations: sol.iterations,
        wall_time_s: secs,
        objective: sol.objective,
        rel_e: sol.rel_e,
        kkt_residual: sol.kkt_residual,
        gap_beta_a: sol.gap_beta_a,
        gap_lbeta_b: sol.gap_lbeta_b,
        gap_hinge: sol.gap_hinge,
        intercept: sol.intercept,
        nonzeros: sol.nonzeros(),
        converged: sol.converged,
    }
}

pub fn run(args: &SolveArgs) -> CliResult<Status> {
    let ds = load_dataset(&args.input)?;
    let problem = build_problem(&ds, args.input.kind, args.lam1, args.lam2)?;
    let config = solver_config(&args.solver)?;
    let (sol, secs) = timed_solve(&problem, &config)?;
    let line = to_line(&run_record(&problem, &sol, secs, None));
    if let Some(out) = &args.out {
        ensure_dir(out)?;
        write_vector(out.join("coef.csv"), &sol.coef, Some("coef"))?;
        write_lines(&out.join("records.jsonl"), std::slice::from_ref(&line))?;
    }
    println!("{line}");
    Ok(if sol.converged { Status::Converged } else { Status::NotConverged })
}
