//! `orthosum`: evaluate, cross-check and benchmark the closed-form series sums.
//!
//! Results go to standard output only after a command has fully succeeded;
//! diagnostics go to standard error. Exit codes: 0 success, 1 failed
//! verification or I/O error, 2 invalid input, 3 non-convergence.

// negated comparisons are how NaN inputs are rejected
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Environment variable overriding the worker thread count.
pub const THREADS_ENV: &str = "ORTHOSUM_THREADS";

#[derive(Debug, Parser)]
#[command(name = "orthosum", version, about = "Closed-form sums of binomially weighted orthogonal-polynomial series")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate one series and print a JSON object.
    Eval(EvalArgs),
    /// Cross-check closed forms, series and contour quadrature on random cases.
    Verify(VerifyArgs),
    /// Time every evaluation route and print a CSV report.
    Bench(BenchArgs),
    /// Tabulate the oscillator propagator over a range of x_b as CSV.
    Propagator(PropagatorArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Closed,
    Series,
    Contour,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// gegenbauer, legendre, chebyshev_t, chebyshev_u, laguerre, hermite or mehler
    pub family: String,
    #[arg(long)]
    pub l: usize,
    /// Real part of the expansion variable t (or z).
    #[arg(long, visible_alias = "z", allow_hyphen_values = true)]
    pub t: f64,
    #[arg(long = "t-im", visible_alias = "z-im", default_value_t = 0.0, allow_hyphen_values = true)]
    pub t_im: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub w: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub u: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub y: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    #[arg(long, value_enum, default_value_t = Method::Closed)]
    pub method: Method,
    /// Relative tolerance of the series oracle.
    #[arg(long, default_value_t = 1e-14)]
    pub rel_tol: f64,
    #[arg(long, default_value_t = 100_000)]
    pub max_terms: usize,
    /// Sum the series in 256-bit arithmetic.
    #[arg(long)]
    pub extended: bool,
    /// Contour radius; defaults to halfway between |t| and 1, at most 0.5.
    #[arg(long)]
    pub radius: Option<f64>,
    #[arg(long, default_value_t = orthosum::contour::DEFAULT_NODES)]
    pub nodes: usize,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Restrict to these families (repeatable or comma-separated); all by default.
    #[arg(long, value_delimiter = ',')]
    pub family: Vec<String>,
    #[arg(long, default_value_t = 100)]
    pub cases: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1e-9)]
    pub tolerance: f64,
    #[arg(long, default_value_t = 8)]
    pub l_max: usize,
    #[arg(long, default_value_t = 0.9)]
    pub t_max: f64,
    /// Draw complex t and z from the disk instead of the real interval.
    #[arg(long)]
    pub complex: bool,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Benchmark a single family; all families by default.
    pub family: Option<String>,
    /// Derivative orders (repeatable or comma-separated).
    #[arg(long, value_delimiter = ',')]
    pub l: Vec<usize>,
    /// Real expansion points (repeatable or comma-separated).
    #[arg(long, value_delimiter = ',')]
    pub t: Vec<f64>,
    /// Reduced grid and shorter timing batches.
    #[arg(long)]
    pub quick: bool,
    /// Timed batches per row; the median is reported.
    #[arg(long, default_value_t = 101)]
    pub reps: usize,
}

#[derive(Debug, Args)]
pub struct PropagatorArgs {
    /// Elapsed time t_b - t_a.
    #[arg(long, allow_hyphen_values = true)]
    pub time: f64,
    #[arg(long = "x-a", default_value_t = 0.0, allow_hyphen_values = true)]
    pub x_a: f64,
    #[arg(long = "x-min", default_value_t = -3.0, allow_hyphen_values = true)]
    pub x_min: f64,
    #[arg(long = "x-max", default_value_t = 3.0, allow_hyphen_values = true)]
    pub x_max: f64,
    #[arg(long = "n-points", default_value_t = 101)]
    pub n_points: usize,
    #[arg(long, default_value_t = 1.0)]
    pub mass: f64,
    #[arg(long, default_value_t = 1.0)]
    pub omega: f64,
    #[arg(long, default_value_t = 1.0)]
    pub hbar: f64,
    #[arg(long, default_value_t = orthosum::propagator::DEFAULT_EPSILON)]
    pub epsilon: f64,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::configure_threads(std::env::var(THREADS_ENV).ok().as_deref()).and_then(|()| commands::run(&cli)) {
        Ok(out) => {
            print!("{}", out.stdout);
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
