use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn bin(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fusedbregman"))
        .args(args)
        .current_dir(dir)
        .env_remove("FB_SEED")
        .output()
        .expect("binary runs")
}

fn json_lines(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).expect("stdout line is json"))
        .collect()
}

fn line_count(path: &Path) -> usize {
    fs::read_to_string(path).unwrap().lines().count()
}

#[test]
fn generate_writes_expected_shapes() {
    let dir = TempDir::new().unwrap();
    let out = bin(&["generate", "--kind", "regression", "--n", "20", "--p", "130", "--seed", "5", "--out", "g"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let g = dir.path().join("g");
    assert_eq!(line_count(&g.join("X.csv")), 20);
    assert_eq!(line_count(&g.join("y.csv")), 20);
    assert_eq!(line_count(&g.join("beta_true.csv")), 130);
    let first = fs::read_to_string(g.join("X.csv")).unwrap();
    assert_eq!(first.lines().next().unwrap().split(',').count(), 130);
    let meta: Value = serde_json::from_str(&fs::read_to_string(g.join("metadata.json")).unwrap()).unwrap();
    assert_eq!(meta["seed"], 5);
    assert_eq!(meta["sigma"], 1.0);

    let out = bin(&["generate", "--kind", "flsa", "--p", "700", "--out", "f"], dir.path());
    assert!(out.status.success());
    assert_eq!(line_count(&dir.path().join("f/signal.csv")), 700);

    let out = bin(&["generate", "--kind", "svm", "--n", "30", "--p", "4", "--out", "s"], dir.path());
    assert!(out.status.success());
    let y = fs::read_to_string(dir.path().join("s/y.csv")).unwrap();
    assert!(y.lines().all(|l| l == "1" || l == "-1"), "{y}");
}

#[test]
fn generate_is_deterministic_in_the_seed() {
    let dir = TempDir::new().unwrap();
    for name in ["a", "b"] {
        assert!(bin(&["generate", "--kind", "regression", "--n", "10", "--p", "125", "--seed", "9", "--out", name], dir.path()).status.success());
    }
    let c = Command::new(env!("CARGO_BIN_EXE_fusedbregman"))
        .args(["generate", "--kind", "regression", "--n", "10", "--p", "125", "--out", "c"])
        .current_dir(dir.path())
        .env("FB_SEED", "10")
        .output()
        .unwrap();
    assert!(c.status.success());
    let read = |n: &str| fs::read(dir.path().join(n).join("X.csv")).unwrap();
    assert_eq!(read("a"), read("b"));
    assert_ne!(read("a"), read("c"));
}

#[test]
fn solve_flsa_converges_on_a_long_signal() {
    let dir = TempDir::new().unwrap();
    assert!(bin(&["generate", "--kind", "flsa", "--p", "10000", "--seed", "1", "--out", "g"], dir.path()).status.success());
    let out = bin(&["solve", "--kind", "flsa", "--signal", "g/signal.csv", "--lam1", "0.1", "--lam2", "0.8", "--out", "r"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let rec = &json_lines(&out)[0];
    assert_eq!(rec["schema"], "fusedbregman.run/1");
    assert_eq!(rec["converged"], true);
    assert_eq!(rec["p"], 10000);
    assert!(rec["rel_e"].as_f64().unwrap() <= 1e-5);
    // header plus one value per coordinate
    assert_eq!(line_count(&dir.path().join("r/coef.csv")), 10001);
    assert_eq!(line_count(&dir.path().join("r/records.jsonl")), 1);
}

#[test]
fn auto_mu_comes_from_the_pretrial_grid() {
    let dir = TempDir::new().unwrap();
    assert!(bin(&["generate", "--kind", "regression", "--n", "30", "--p", "200", "--seed", "2", "--out", "g"], dir.path()).status.success());
    let out = bin(&["solve", "--kind", "regression", "--x", "g/X.csv", "--y", "g/y.csv", "--lam1", "4", "--lam2", "5", "--mu", "auto"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let rec = &json_lines(&out)[0];
    let y: Vec<f64> = fs::read_to_string(dir.path().join("g/y.csv"))
        .unwrap()
        .lines()
        .map(|l| l.parse().unwrap())
        .collect();
    let norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
    let mu = rec["mu1"].as_f64().unwrap();
    let on_grid = [0.2, 0.4, 0.6, 0.8, 1.0].iter().any(|c| (c * norm - mu).abs() <= 1e-9 * norm) || mu == 1.0;
    assert!(on_grid, "mu {mu} not on grid for norm {norm}");
    assert_eq!(rec["mu1"], rec["mu2"]);
}

#[test]
fn fixed_mu_is_used_verbatim() {
    let dir = TempDir::new().unwrap();
    assert!(bin(&["generate", "--kind", "flsa", "--p", "600", "--out", "g"], dir.path()).status.success());
    let out = bin(&["solve", "--kind", "flsa", "--signal", "g/signal.csv", "--lam1", "0.1", "--lam2", "0.8", "--mu", "2.5"], dir.path());
    assert_eq!(json_lines(&out)[0]["mu1"], 2.5);
}

#[test]
fn missing_input_fails_without_outputs() {
    let dir = TempDir::new().unwrap();
    let out = bin(&["solve", "--kind", "flsa", "--signal", "absent.csv", "--lam1", "1", "--lam2", "1", "--out", "r"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("absent.csv"));
    assert!(out.stdout.is_empty());
    assert!(!dir.path().join("r").exists());
}

#[test]
fn usage_errors_exit_one_and_help_exits_zero() {
    let dir = TempDir::new().unwrap();
    assert_eq!(bin(&["solve", "--kind", "flsa"], dir.path()).status.code(), Some(1));
    assert_eq!(bin(&["frobnicate"], dir.path()).status.code(), Some(1));
    assert_eq!(bin(&["--help"], dir.path()).status.code(), Some(0));
}

#[test]
fn non_converged_solve_exits_two() {
    let dir = TempDir::new().unwrap();
    assert!(bin(&["generate", "--kind", "flsa", "--p", "600", "--out", "g"], dir.path()).status.success());
    let out = bin(&["solve", "--kind", "flsa", "--signal", "g/signal.csv", "--lam1", "0.1", "--lam2", "0.8", "--max-iter", "2", "--out", "r"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json_lines(&out)[0]["converged"], false);
    assert!(dir.path().join("r/coef.csv").exists());
}

#[test]
fn cv_on_a_tiny_set() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("X.csv"), "1,0\n0,1\n1,1\n2,1\n").unwrap();
    fs::write(dir.path().join("y.csv"), "1\n1\n2\n3\n").unwrap();
    let args = ["cv", "--kind", "regression", "--x", "X.csv", "--y", "y.csv", "--lam1", "0.1,0.2", "--lam2", "0.1", "--folds", "2", "--seed", "3"];
    let out = bin(&args, dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let recs = json_lines(&out);
    // two grid points, each with two folds and one aggregate
    assert_eq!(recs.len(), 6);
    for g in recs.chunks(3) {
        assert_eq!(g[0]["test_size"].as_u64().unwrap() + g[1]["test_size"].as_u64().unwrap(), 4);
        assert!(g[2]["fold"].is_null());
        assert_eq!(g[2]["test_size"], 4);
        let sse: f64 = g[..2].iter().map(|r| r["test_error"].as_f64().unwrap() * r["test_size"].as_f64().unwrap()).sum();
        assert!((g[2]["test_error"].as_f64().unwrap() - sse / 4.0).abs() < 1e-12);
    }
    let mut parallel = args.to_vec();
    parallel.extend(["--jobs", "2"]);
    let again = bin(&parallel, dir.path());
    let strip = |v: Vec<Value>| v.into_iter().map(|mut r| { r["command"] = Value::Null; r }).collect::<Vec<_>>();
    assert_eq!(strip(recs), strip(json_lines(&again)));
}

#[test]
fn cv_svm_reports_error_counts() {
    let dir = TempDir::new().unwrap();
    assert!(bin(&["generate", "--kind", "svm", "--n", "40", "--p", "5", "--separation", "6", "--out", "g"], dir.path()).status.success());
    let out = bin(&["cv", "--kind", "svm", "--x", "g/X.csv", "--y", "g/y.csv", "--lam1", "0.01", "--lam2", "0.01", "--folds", "4"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let recs = json_lines(&out);
    let agg = recs.last().unwrap();
    let errors = agg["errors"].as_str().unwrap();
    let (m, t) = errors.split_once('/').unwrap();
    assert_eq!(t, "40");
    assert!(m.parse::<usize>().unwrap() <= 40);
}

#[test]
fn cv_rejects_flsa() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("s.csv"), "1\n2\n3\n").unwrap();
    let out = bin(&["cv", "--kind", "flsa", "--signal", "s.csv", "--lam1", "1", "--lam2", "1"], dir.path());
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn svm_rejects_non_label_responses() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("X.csv"), "1,0\n0,1\n").unwrap();
    fs::write(dir.path().join("y.csv"), "1\n0.5\n").unwrap();
    let out = bin(&["solve", "--kind", "svm", "--x", "X.csv", "--y", "y.csv", "--lam1", "1", "--lam2", "1"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.starts_with("error: "), "{err}");
    assert!(err.contains("0.5"), "{err}");
}

#[test]
fn csv_with_named_response() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("d.csv"), "a,resp,b\n1,1,0\n0,2,1\n1,3,1\n2,5,1\n").unwrap();
    let out = bin(&["solve", "--kind", "regression", "--data", "d.csv", "--response", "resp", "--header", "--lam1", "0.1", "--lam2", "0.1"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let rec = &json_lines(&out)[0];
    assert_eq!(rec["n"], 4);
    assert_eq!(rec["p"], 2);
}

#[test]
fn bench_writes_schema_and_averages_repeats() {
    let dir = TempDir::new().unwrap();
    for (name, reps) in [("one", "1"), ("three", "3")] {
        let out = bin(&["bench", "--kind", "flsa", "--p", "500,1000", "--lam1", "0.1", "--lam2", "0.8", "--repeats", reps, "--out", name], dir.path());
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        let bench = fs::read_to_string(dir.path().join(name).join("bench.csv")).unwrap();
        let mut lines = bench.lines();
        assert_eq!(lines.next(), Some("method,n,p,rho,mean_time_s,mean_iters"));
        let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
        assert_eq!(rows.len(), 2);
        for r in &rows {
            assert_eq!(r[0], "SBFLSA");
            assert!(r[4].parse::<f64>().unwrap() > 0.0);
        }
        let scaling = fs::read_to_string(dir.path().join(name).join("scaling.csv")).unwrap();
        assert_eq!(scaling.lines().count(), 3);
        assert!(json_lines(&out)[0]["slope_p"].is_f64());
    }
}
