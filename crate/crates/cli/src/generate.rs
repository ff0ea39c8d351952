use fusedbregman::data::{self, DEFAULT_FLSA_SIGMA, DEFAULT_REGRESSION_SIGMA};
use serde_json::json;

use crate::args::{GenerateArgs, Kind};
use crate::input::{ensure_dir, write_lines};
use crate::{command_line, CliResult, Status};

pub fn run(args: &GenerateArgs) -> CliResult<Status> {
    let seed = args.seed.seed;
    let out = &args.out;
    let sigma = args.sigma.unwrap_or(match args.kind {
        Kind::Flsa => DEFAULT_FLSA_SIGMA,
        _ => DEFAULT_REGRESSION_SIGMA,
    });
    // Everything is generated before the output directory is touched.
    let mut shape = (args.n, args.p);
    match args.kind {
        Kind::Regression => {
            let x = data::gen_equicorrelated(args.n, args.p, args.rho, seed)?.x.expect("design");
            let beta = data::default_beta(args.p)?;
            let y = data::gen_regression(&x, &beta, sigma, seed.wrapping_add(1))?;
            ensure_dir(out)?;
            data::write_matrix(out.join("X.csv"), &x, None)?;
            data::write_vector(out.join("y.csv"), &y, None)?;
            data::write_vector(out.join("beta_true.csv"), &beta, None)?;
        }
        Kind::Flsa => {
            let y = data::gen_flsa_signal(args.p, sigma, seed)?;
            let truth = data::flsa_truth(args.p)?;
            shape = (args.p, args.p);
            ensure_dir(out)?;
            data::write_vector(out.join("signal.csv"), &y, None)?;
            data::write_vector(out.join("beta_true.csv"), &truth, None)?;
        }
        Kind::Svm => {
            let ds = data::gen_two_class(args.n, args.p, args.separation, seed)?;
            ensure_dir(out)?;
            data::write_matrix(out.join("X.csv"), ds.x.as_ref().expect("design"), None)?;
            data::write_vector(out.join("y.csv"), &ds.y, None)?;
        }
    }
    let meta = json!({
        "schema": "fusedbregman.generate/1",
        "command": command_line(),
        "kind": format!("{:?}", args.kind).to_lowercase(),
        "n": shape.0,
        "p": shape.1,
        "rho": (args.kind == Kind::Regression).then_some(args.rho),
        "sigma": (args.kind != Kind::Svm).then_some(sigma),
        "separation": (args.kind == Kind::Svm).then_some(args.separation),
        "seed": seed,
    });
    write_lines(&out.join("metadata.json"), &[meta.to_string()])?;
    println!("{meta}");
    Ok(Status::Converged)
}
