use std::time::Duration;

use orthosum::bench::{run_bench, write_bench_csv, BenchConfig};
use orthosum::case::{Case, Family};
use orthosum::contour::ContourSpec;
use orthosum::oracle::{PrecisionCtx, PrecisionMode};
use orthosum::propagator::{propagator_grid, write_grid_csv, OscillatorParams};
use orthosum::verify::{run_verify, VerifyConfig};
use orthosum::{Complex, Error};
use serde::Serialize;

use crate::{BenchArgs, Cli, Command, EvalArgs, Method, PropagatorArgs, VerifyArgs};

/// Buffered standard output and the exit code to report with it.
#[derive(Debug)]
pub struct Output {
    pub stdout: String,
    pub code: u8,
}

impl Output {
    fn ok(stdout: String) -> Self {
        Self { stdout, code: 0 }
    }
}

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self { code: 2, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NotConverged(_) | Error::QuadratureDiverged { .. } => 3,
            _ => 2,
        };
        Self { code, message: e.to_string() }
    }
}

type CmdResult<T> = Result<T, Failure>;

pub fn configure_threads(value: Option<&str>) -> CmdResult<()> {
    let Some(raw) = value else { return Ok(()) };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::usage(format!("{} must be a positive integer, got '{raw}'", crate::THREADS_ENV)))?;
    // a pool configured earlier in the process is left in place
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

pub fn run(cli: &Cli) -> CmdResult<Output> {
    match &cli.command {
        Command::Eval(a) => eval(a),
        Command::Verify(a) => verify(a),
        Command::Bench(a) => bench(a),
        Command::Propagator(a) => propagator(a),
    }
}

fn parse_family(name: &str) -> CmdResult<Family> {
    name.parse().map_err(Failure::from)
}

fn required(v: Option<f64>, flag: &str, family: Family) -> CmdResult<f64> {
    v.ok_or_else(|| Failure::usage(format!("{family} requires --{flag}")))
}

fn build_case(a: &EvalArgs) -> CmdResult<Case> {
    let family = parse_family(&a.family)?;
    let param = match family {
        Family::Gegenbauer => required(a.lambda, "lambda", family)?,
        Family::Laguerre => required(a.alpha, "alpha", family)?,
        _ => 0.0,
    };
    let arg = match family {
        Family::Laguerre => required(a.u, "u", family)?,
        Family::Hermite | Family::Mehler => required(a.x, "x", family)?,
        _ => required(a.w, "w", family)?,
    };
    let y = if family == Family::Mehler { required(a.y, "y", family)? } else { 0.0 };
    Ok(Case { family, param, l: a.l, t: Complex::new(a.t, a.t_im), arg, y })
}

#[derive(Serialize)]
struct EvalJson {
    value_re: f64,
    value_im: f64,
    method: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    terms_used: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    est_abs_error: Option<f64>,
}

fn json_line<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string(v).expect("plain structs serialize");
    s.push('\n');
    s
}

fn eval(a: &EvalArgs) -> CmdResult<Output> {
    let case = build_case(a)?;
    let (value, method, terms_used, est_abs_error) = match a.method {
        Method::Closed => (case.closed::<f64>()?, "closed", None, None),
        Method::Series => {
            let mode = if a.extended { PrecisionMode::Extended } else { PrecisionMode::Standard };
            let ctx = PrecisionCtx { rel_tol: a.rel_tol, max_terms: a.max_terms, mode, ..PrecisionCtx::default() };
            let r = case.series(&ctx)?;
            (r.value, "series", Some(r.terms_used), Some(r.est_abs_error))
        }
        Method::Contour => {
            let spec = match a.radius {
                Some(r) => ContourSpec::new(r, a.nodes)?,
                None => ContourSpec { nodes: a.nodes, ..ContourSpec::for_point(case.t.norm()) },
            };
            (case.contour_with(&spec)?.value, "contour", None, None)
        }
    };
    if !(value.re.is_finite() && value.im.is_finite()) {
        return Err(Failure::usage("result is not finite"));
    }
    Ok(Output::ok(json_line(&EvalJson { value_re: value.re, value_im: value.im, method, terms_used, est_abs_error })))
}

#[derive(Serialize)]
struct VerifyJson {
    cases: usize,
    failures: usize,
    worst_rel_err: f64,
}

fn verify(a: &VerifyArgs) -> CmdResult<Output> {
    let families = if a.family.is_empty() {
        Family::ALL.to_vec()
    } else {
        a.family.iter().map(|f| parse_family(f)).collect::<CmdResult<Vec<_>>>()?
    };
    let cfg = VerifyConfig {
        families,
        cases: a.cases,
        seed: a.seed,
        tolerance: a.tolerance,
        l_max: a.l_max,
        t_max: a.t_max,
        complex: a.complex,
    };
    let s = run_verify(&cfg)?;
    let stdout = json_line(&VerifyJson { cases: s.cases, failures: s.failures, worst_rel_err: s.worst_rel_err });
    Ok(Output { stdout, code: if s.failures == 0 { 0 } else { 1 } })
}

fn bench(a: &BenchArgs) -> CmdResult<Output> {
    let mut cfg = if a.quick { BenchConfig::quick() } else { BenchConfig::full() };
    if let Some(f) = &a.family {
        cfg.families = vec![parse_family(f)?];
    }
    if !a.l.is_empty() {
        cfg.ls = a.l.clone();
    }
    if !a.t.is_empty() {
        if let Some(t) = a.t.iter().find(|t| !(t.abs() < 1.0)) {
            return Err(Failure::usage(format!("bench points must satisfy |t| < 1, got {t}")));
        }
        cfg.points = a.t.clone();
    }
    if a.reps == 0 {
        return Err(Failure::usage("--reps must be positive"));
    }
    cfg.reps = a.reps;
    if a.quick {
        cfg.min_batch = cfg.min_batch.min(Duration::from_micros(5));
    }
    let rows = run_bench(&cfg)?;
    let mut buf = Vec::new();
    write_bench_csv(&rows, &mut buf).map_err(|e| Failure { code: 1, message: e.to_string() })?;
    Ok(Output::ok(String::from_utf8(buf).expect("CSV is ASCII")))
}

fn propagator(a: &PropagatorArgs) -> CmdResult<Output> {
    let params = OscillatorParams { mass: a.mass, omega: a.omega, hbar: a.hbar, epsilon: a.epsilon };
    let rows = propagator_grid(&params, a.time, a.x_a, (a.x_min, a.x_max), a.n_points)?;
    let mut buf = Vec::new();
    write_grid_csv(&rows, &mut buf).map_err(|e| Failure { code: 1, message: e.to_string() })?;
    Ok(Output::ok(String::from_utf8(buf).expect("CSV is ASCII")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::Parser;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from([&["orthosum"], args].concat()).unwrap()
    }

    #[test]
    fn error_codes() {
        assert_eq!(Failure::from(Error::Domain("x".into())).code, 2);
        assert_eq!(Failure::from(Error::InvalidParameter("x".into())).code, 2);
        assert_eq!(Failure::from(Error::QuadratureDiverged { residue: 1.0 }).code, 3);
    }

    #[test]
    fn thread_override_must_be_positive() {
        assert!(configure_threads(None).is_ok());
        for bad in ["0", "-2", "four", ""] {
            assert_eq!(configure_threads(Some(bad)).unwrap_err().code, 2, "{bad}");
        }
    }

    #[test]
    fn missing_family_flags_are_named() {
        let Command::Eval(a) = parse(&["eval", "laguerre", "--l", "1", "--t", "0.2", "--u", "1"]).command else {
            unreachable!()
        };
        let e = build_case(&a).unwrap_err();
        assert_eq!(e.code, 2);
        assert!(e.message.contains("--alpha"), "{}", e.message);
    }

    #[test]
    fn mehler_case_carries_both_coordinates() {
        let Command::Eval(a) =
            parse(&["eval", "mehler", "--l", "2", "--z", "0.3", "--z-im", "-0.1", "--x", "1", "--y", "-2"]).command
        else {
            unreachable!()
        };
        let c = build_case(&a).unwrap();
        assert_eq!((c.family, c.l, c.t, c.arg, c.y), (Family::Mehler, 2, Complex::new(0.3, -0.1), 1.0, -2.0));
    }
}
