//! Acceptance suite. Runs every criterion in sequence (timings are part of several
//! checks, so nothing runs concurrently) and prints one PASS/FAIL line each.
//!
//! `cargo test -p fusedbregman --test acceptance -- 3 7` runs a subset.

use std::process::ExitCode;
use std::time::Instant;

use fusedbregman::data::{
    default_beta, gen_equicorrelated, gen_flsa_signal, gen_regression, gen_two_class, rng_from_seed,
};
use fusedbregman::linalg::{matvec, matvec_transpose, norm_inf};
use fusedbregman::solvers::{mu_candidates, RelEMonitor};
use fusedbregman::verify::brute_force_fused;
use fusedbregman::{
    objective_flsvm, sb_flsa, sb_flsvm, sb_fused_lasso, solve, FusedProblem, Solution, SolverConfig,
};
use ndarray::Array2;
use rand::Rng;
use rand_distr::StandardNormal;

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn gaussian_matrix(rng: &mut impl Rng, n: usize, p: usize) -> Array2<f64> {
    Array2::from_shape_fn((n, p), |_| rng.sample(StandardNormal))
}

fn design_instance(n: usize, p: usize, rho: f64, seed: u64) -> (Array2<f64>, Vec<f64>) {
    let x = gen_equicorrelated(n, p, rho, seed).unwrap().x.unwrap();
    let y = gen_regression(&x, &default_beta(p).unwrap(), 1.0, seed + 10_000).unwrap();
    (x, y)
}

/// Least-squares slope of `ln t` against `ln s`.
fn loglog_slope(sizes: &[f64], times: &[f64]) -> f64 {
    let xs: Vec<f64> = sizes.iter().map(|v| v.ln()).collect();
    let ys: Vec<f64> = times.iter().map(|v| v.ln()).collect();
    let mx = xs.iter().sum::<f64>() / xs.len() as f64;
    let my = ys.iter().sum::<f64>() / ys.len() as f64;
    let num: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    num / den
}

fn tight() -> SolverConfig {
    SolverConfig::with_mu(1.0).rel_tol(1e-14).max_iter(500_000)
}

fn oracle_equivalence(flsa: bool) -> Outcome {
    let mut rng = rng_from_seed(if flsa { 202 } else { 101 });
    let mut worst_obj = 0.0_f64;
    let mut worst_coef = 0.0_f64;
    let mut unique = 0;
    for case in 0..50 {
        let (problem, is_unique) = if flsa {
            let p = rng.random_range(2..=5);
            let y: Vec<f64> = (0..p).map(|_| 2.0 * rng.sample::<f64, _>(StandardNormal)).collect();
            let lam1 = rng.random_range(0.1..=2.0);
            let lam2 = rng.random_range(0.1..=2.0);
            // The signal approximator is strictly convex.
            (FusedProblem::flsa(y, lam1, lam2).unwrap(), true)
        } else {
            let p = rng.random_range(2..=4);
            let n = rng.random_range(2..=8);
            let x = gaussian_matrix(&mut rng, n, p);
            let y: Vec<f64> = (0..n).map(|_| 2.0 * rng.sample::<f64, _>(StandardNormal)).collect();
            let lam1 = rng.random_range(0.1..=2.0);
            let lam2 = rng.random_range(0.1..=2.0);
            // A Gaussian design with n >= p has full column rank, so the minimizer is unique.
            (FusedProblem::regression(x, y, lam1, lam2).unwrap(), n >= p)
        };
        let (beta_star, phi_star) = brute_force_fused(&problem).map_err(|e| e.to_string())?;
        let sol = if flsa {
            sb_flsa(&problem, &tight())
        } else {
            sb_fused_lasso(&problem, &tight())
        }
        .map_err(|e| e.to_string())?;
        let obj_err = (sol.objective - phi_star).abs() / (1.0 + phi_star);
        worst_obj = worst_obj.max(obj_err);
        check(obj_err <= 1e-6, || {
            format!("case {case}: objective {} vs oracle {phi_star}", sol.objective)
        })?;
        if is_unique {
            unique += 1;
            let d = sol
                .coef
                .iter()
                .zip(&beta_star)
                .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
            worst_coef = worst_coef.max(d);
            check(d <= 1e-3, || format!("case {case}: coefficient gap {d:e}"))?;
        }
    }
    Ok(format!(
        "50 instances, max relative objective gap {worst_obj:.2e}, max coef gap {worst_coef:.2e} over {unique} unique instances"
    ))
}

fn criterion_1() -> Outcome {
    oracle_equivalence(false)
}

fn criterion_2() -> Outcome {
    oracle_equivalence(true)
}

fn criterion_3() -> Outcome {
    let mut parts = Vec::new();
    for (i, rho) in [0.0, 0.4, 0.8].into_iter().enumerate() {
        let (x, y) = design_instance(200, 2000, rho, 30 + i as u64);
        let mut xty = vec![0.0; 2000];
        matvec_transpose(&x, &y, &mut xty);
        let bound = 1e-4 * (1.0 + norm_inf(&xty));
        let problem = FusedProblem::regression(x, y, 16.0, 20.0).unwrap();
        let t = Instant::now();
        let sol = solve(&problem, &SolverConfig::auto().rel_tol(1e-8)).map_err(|e| e.to_string())?;
        let secs = t.elapsed().as_secs_f64();
        let kkt = sol.kkt_residual.unwrap();
        check(sol.converged, || format!("rho={rho}: not converged"))?;
        check(kkt <= bound, || format!("rho={rho}: KKT residual {kkt:e} > {bound:e}"))?;
        parts.push(format!("rho={rho}: {kkt:.1e} <= {bound:.1e} ({secs:.1}s)"));
    }
    Ok(parts.join("; "))
}

fn criterion_4() -> Outcome {
    let (x, y) = design_instance(100, 500, 0.0, 4);
    let problem = FusedProblem::regression(x, y, 16.0, 20.0).unwrap();
    let mut objectives = Vec::new();
    for mu in mu_candidates(&problem) {
        let sol = sb_fused_lasso(&problem, &SolverConfig::with_mu(mu).rel_tol(1e-11).max_iter(200_000))
            .map_err(|e| e.to_string())?;
        check(sol.converged, || format!("mu={mu}: not converged"))?;
        objectives.push(sol.objective);
    }
    let lo = objectives.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = objectives.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let spread = (hi - lo) / lo;
    check(spread <= 1e-5, || format!("objectives {objectives:?} spread {spread:e}"))?;
    Ok(format!("5 grid values, relative spread {spread:.2e}"))
}

fn criterion_5() -> Outcome {
    let n = 50;
    let mut counts = Vec::new();
    for seed in 0..20 {
        let (x, y) = design_instance(n, 2000, 0.0, 500 + seed);
        let problem = FusedProblem::regression(x, y, 16.0, 20.0).unwrap();
        let sol = solve(&problem, &SolverConfig::auto()).map_err(|e| e.to_string())?;
        let worst = *sol.pcg_iters.iter().max().unwrap();
        check(worst <= n + 1, || format!("seed {seed}: PCG took {worst} iterations"))?;
        counts.extend(sol.pcg_iters);
    }
    counts.sort_unstable();
    let median = counts[counts.len() / 2];
    check(median <= 15, || format!("median PCG count {median}"))?;
    Ok(format!(
        "{} beta steps, max {} <= {}, median {median}",
        counts.len(),
        counts.last().unwrap(),
        n + 1
    ))
}

fn criterion_6() -> Outcome {
    let (x, y) = design_instance(100, 500, 0.0, 6);
    let truth = default_beta(500).unwrap();
    let problem = FusedProblem::regression(x, y, 16.0, 20.0).unwrap();
    let sol = solve(&problem, &SolverConfig::auto()).map_err(|e| e.to_string())?;
    let zeros = sol.coef.iter().filter(|v| **v == 0.0).count();
    check(zeros > 0, || "no exact zeros".into())?;
    // True blocks widened by 3 on each side.
    let allowed = |j: usize| (j.saturating_sub(3)..=(j + 3).min(499)).any(|k| truth[k] != 0.0);
    let stray: Vec<usize> = (0..500).filter(|&j| sol.coef[j] != 0.0 && !allowed(j)).collect();
    check(stray.is_empty(), || {
        let largest = stray.iter().map(|&j| sol.coef[j].abs()).fold(0.0, f64::max);
        format!("nonzeros outside blocks at {stray:?} (largest magnitude {largest:.1e})")
    })?;
    Ok(format!("{zeros} exact zeros, {} nonzeros all within the blocks +-3", 500 - zeros))
}

/// Seconds per iteration of `sb_flsa` at a fixed `mu`, best of three runs.
fn flsa_iteration_time(p: usize) -> f64 {
    let y = gen_flsa_signal(p, 0.5, 70).unwrap();
    let problem = FusedProblem::flsa(y, 0.1, 0.8).unwrap();
    let iters = (20_000_000 / p).clamp(20, 2000);
    let config = SolverConfig::with_mu(1.0).rel_tol(0.0).max_iter(iters);
    (0..3)
        .map(|_| {
            let t = Instant::now();
            let sol = sb_flsa(&problem, &config).unwrap();
            t.elapsed().as_secs_f64() / sol.iterations as f64
        })
        .fold(f64::INFINITY, f64::min)
}

fn criterion_7() -> Outcome {
    let y = gen_flsa_signal(1_000_000, 0.5, 7).unwrap();
    let problem = FusedProblem::flsa(y, 0.1, 0.8).unwrap();
    let t = Instant::now();
    let sol = solve(&problem, &SolverConfig::auto()).map_err(|e| e.to_string())?;
    let secs = t.elapsed().as_secs_f64();
    check(sol.converged, || "p=1e6 solve did not converge".into())?;
    check(secs < 60.0, || format!("p=1e6 solve took {secs:.1}s"))?;
    let sizes = [1e4, 1e5, 1e6];
    let per_iter: Vec<f64> = sizes.iter().map(|&p| flsa_iteration_time(p as usize)).collect();
    let slope = loglog_slope(&sizes, &per_iter);
    check(slope <= 1.2, || format!("per-iteration slope {slope:.3} ({per_iter:?})"))?;
    Ok(format!(
        "p=1e6 solved in {secs:.1}s ({} iterations); per-iteration slope {slope:.2}",
        sol.iterations
    ))
}

/// Mean wall time of `solve` over two designs and two penalty pairs.
fn regression_time(n: usize, p: usize) -> Result<f64, String> {
    let mut total = 0.0;
    for seed in [81, 82] {
        let (x, y) = design_instance(n, p, 0.0, seed);
        for (lam1, lam2) in [(16.0, 20.0), (8.0, 10.0)] {
            let problem = FusedProblem::regression(x.clone(), y.clone(), lam1, lam2).unwrap();
            let t = Instant::now();
            let sol = solve(&problem, &SolverConfig::auto()).map_err(|e| e.to_string())?;
            total += t.elapsed().as_secs_f64();
            check(sol.converged, || format!("n={n}, p={p} did not converge"))?;
        }
    }
    Ok(total / 4.0)
}

fn criterion_8() -> Outcome {
    let ps = [1000.0, 2000.0, 4000.0, 8000.0];
    let tp = ps.iter().map(|&p| regression_time(200, p as usize)).collect::<Result<Vec<_>, _>>()?;
    let slope_p = loglog_slope(&ps, &tp);
    let ns = [50.0, 100.0, 200.0];
    let tn = ns.iter().map(|&n| regression_time(n as usize, 5000)).collect::<Result<Vec<_>, _>>()?;
    let slope_n = loglog_slope(&ns, &tn);
    check(slope_p <= 1.3, || format!("slope in p {slope_p:.3} ({tp:?})"))?;
    check(slope_n <= 1.3, || format!("slope in n {slope_n:.3} ({tn:?})"))?;
    Ok(format!("slope in p {slope_p:.2}, slope in n {slope_n:.2}"))
}

fn misclassified(x: &Array2<f64>, y: &[f64], sol: &Solution) -> usize {
    let mut f = vec![0.0; x.nrows()];
    matvec(x, &sol.coef, &mut f);
    let b0 = sol.intercept.unwrap();
    f.iter().zip(y).filter(|(fi, yi)| (*fi + b0) * **yi <= 0.0).count()
}

fn criterion_9() -> Outcome {
    let ds = gen_two_class(100, 50, 10.0, 9).unwrap();
    let x = ds.x.unwrap();
    let problem = FusedProblem::svm(x.clone(), ds.y.clone(), 1e-3, 1e-3).unwrap();
    let config = SolverConfig::default().rel_tol(1e-10).max_iter(500_000);
    let sol = solve(&problem, &config).map_err(|e| e.to_string())?;
    let errors = misclassified(&x, &ds.y, &sol);
    let kkt = sol.kkt_residual.unwrap();
    check(errors == 0, || format!("{errors} training errors"))?;
    check(kkt <= 1e-3, || format!("KKT residual {kkt:e}"))?;

    let mut rng = rng_from_seed(909);
    let mut worst_margin = f64::INFINITY;
    for case in 0..20 {
        let n = 2 * rng.random_range(1..=3);
        let p = rng.random_range(1..=3);
        let x = gaussian_matrix(&mut rng, n, p);
        let y: Vec<f64> = (0..n).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect();
        let problem = FusedProblem::svm(x, y, rng.random_range(0.01..0.5), rng.random_range(0.01..0.5)).unwrap();
        let sol = sb_flsvm(&problem, &SolverConfig::default().rel_tol(1e-12).max_iter(500_000))
            .map_err(|e| e.to_string())?;
        let best_probe = (0..200)
            .map(|_| {
                let beta: Vec<f64> = (0..p).map(|_| rng.random_range(-3.0..3.0)).collect();
                objective_flsvm(&problem, &beta, rng.random_range(-3.0..3.0)).unwrap()
            })
            .fold(f64::INFINITY, f64::min);
        worst_margin = worst_margin.min(best_probe - sol.objective);
        check(sol.objective <= best_probe + 1e-8, || {
            format!("case {case}: objective {} above probe {best_probe}", sol.objective)
        })?;
    }
    Ok(format!(
        "separable set: 0 errors, KKT {kkt:.1e} ({} iterations); 20 tiny instances dominate probes (min margin {worst_margin:.1e})",
        sol.iterations
    ))
}

fn criterion_10() -> Outcome {
    let (x, y) = design_instance(60, 200, 0.4, 10);
    let regression = FusedProblem::regression(x, y, 8.0, 10.0).unwrap();
    let signal = FusedProblem::flsa(gen_flsa_signal(5000, 0.5, 10).unwrap(), 0.1, 0.8).unwrap();
    let ds = gen_two_class(60, 20, 2.0, 10).unwrap();
    let classifier = FusedProblem::svm(ds.x.unwrap(), ds.y, 0.01, 0.01).unwrap();
    let mut parts = Vec::new();
    for (name, problem) in [("regression", regression), ("flsa", signal), ("svm", classifier)] {
        for config in [SolverConfig::default(), SolverConfig::auto()] {
            let sol = solve(&problem, &config).map_err(|e| e.to_string())?;
            let h = &sol.state.obj_history;
            check(h.iter().all(|v| v.is_finite()), || format!("{name}: non-finite objective"))?;
            check(sol.converged, || format!("{name}: not converged"))?;
            check(h.len() == sol.iterations, || format!("{name}: history length"))?;
            let (prev, curr) = (h[h.len() - 2], h[h.len() - 1]);
            let rel = (curr - prev).abs() / prev;
            check(rel <= 1e-5, || format!("{name}: final RelE {rel:e}"))?;
            // Replaying the history through the monitor stops exactly at the last entry.
            let mut monitor = RelEMonitor::new(1e-5);
            let stop = h.iter().position(|&v| monitor.observe(v)).map(|i| i + 1);
            check(stop == Some(h.len()), || format!("{name}: stop index {stop:?} vs {}", h.len()))?;
            parts.push(format!("{name} {rel:.1e}"));
        }
    }
    Ok(format!("final RelE {}", parts.join(", ")))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("oracle equivalence, fused Lasso", criterion_1),
        ("oracle equivalence, signal approximator", criterion_2),
        ("KKT certification at n=200, p=2000", criterion_3),
        ("mu-independence of the limit", criterion_4),
        ("PCG iteration bound", criterion_5),
        ("exact sparsity and block support", criterion_6),
        ("signal approximator at p=1e6, O(p) iterations", criterion_7),
        ("regression time scaling", criterion_8),
        ("classifier correctness", criterion_9),
        ("stopping-rule contract", criterion_10),
    ];
    let selected: Vec<usize> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let id = i + 1;
        if !selected.is_empty() && !selected.contains(&id) {
            continue;
        }
        let t = Instant::now();
        let outcome = run();
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS [{id}] {name}: {detail} [{secs:.1}s]"),
            Err(detail) => {
                failed += 1;
                println!("FAIL [{id}] {name}: {detail} [{secs:.1}s]");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
