//! `fusedbregman` command-line tool.
//!
//! Exit codes: 0 on success, 2 when a solve hit `--max-iter` without converging,
//! 1 on usage or data errors.

mod args;
mod bench;
mod cv;
mod generate;
mod input;
mod record;
mod solve;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

pub type CliResult<T> = Result<T, Box<dyn std::error::Error>>;

/// Whether every solve of a command converged.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Converged,
    NotConverged,
}

impl Status {
    pub fn from_all(flags: impl IntoIterator<Item = bool>) -> Self {
        if flags.into_iter().all(|c| c) {
            Status::Converged
        } else {
            Status::NotConverged
        }
    }
}

pub fn command_line() -> String {
    std::env::args().collect::<Vec<_>>().join(" ")
}

fn run(cli: Cli) -> CliResult<Status> {
    match cli.command {
        Command::Generate(a) => generate::run(&a),
        Command::Solve(a) => solve::run(&a),
        Command::Cv(a) => cv::run(&a),
        Command::Bench(a) => bench::run(&a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(Status::Converged) => ExitCode::SUCCESS,
        Ok(Status::NotConverged) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
