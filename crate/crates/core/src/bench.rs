//! Timing of the closed forms against the series oracle and contour quadrature.

use std::hint::black_box;
use std::io::{self, Write};
use std::time::{Duration, Instant};

use num_complex::Complex;

use crate::case::{Case, Family};
use crate::error::{Error, Result};
use crate::oracle::PrecisionCtx;
use crate::scalar::complex_to_f64;
use crate::Extended;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Closed,
    Series,
    Contour,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Closed, Method::Series, Method::Contour];

    pub fn name(self) -> &'static str {
        match self {
            Method::Closed => "closed",
            Method::Series => "series",
            Method::Contour => "contour",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub families: Vec<Family>,
    pub ls: Vec<usize>,
    pub points: Vec<f64>,
    pub reps: usize,
    /// Lower bound on the duration of one timed batch.
    pub min_batch: Duration,
}

impl BenchConfig {
    pub fn full() -> Self {
        Self {
            families: Family::ALL.to_vec(),
            ls: vec![1, 3, 5, 8],
            points: vec![0.1, 0.3, 0.5, 0.7, 0.8, 0.9],
            reps: 101,
            min_batch: Duration::from_micros(50),
        }
    }

    pub fn quick() -> Self {
        Self {
            families: Family::ALL.to_vec(),
            ls: vec![1, 5],
            points: vec![0.1, 0.5, 0.9],
            reps: 101,
            min_batch: Duration::from_micros(5),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub family: Family,
    pub l: usize,
    pub t_or_z: f64,
    pub method: Method,
    pub nanos_per_eval: f64,
    pub rel_err_vs_extended: f64,
    /// Series terms summed; zero for the other methods.
    pub terms_used: usize,
}

/// The benchmark point for `family` at `l` and real `t`.
pub fn bench_case(family: Family, l: usize, t: f64) -> Case {
    let (param, arg, y) = match family {
        Family::Gegenbauer => (1.5, 0.3, 0.0),
        Family::Laguerre => (0.5, 1.0, 0.0),
        Family::Hermite => (0.0, 0.7, 0.0),
        Family::Mehler => (0.0, 0.7, -0.4),
        _ => (0.0, 0.3, 0.0),
    };
    Case { family, param, l, t: Complex::new(t, 0.0), arg, y }
}

/// Median nanoseconds per call of `f`, over `reps` batches.
fn time_per_eval<R>(reps: usize, min_batch: Duration, mut f: impl FnMut() -> R) -> f64 {
    let mut batch = 1usize;
    loop {
        let start = Instant::now();
        for _ in 0..batch {
            black_box(f());
        }
        if start.elapsed() >= min_batch || batch >= 1 << 20 {
            break;
        }
        batch *= 2;
    }
    let mut samples: Vec<f64> = (0..reps.max(1))
        .map(|_| {
            let start = Instant::now();
            for _ in 0..batch {
                black_box(f());
            }
            start.elapsed().as_nanos() as f64 / batch as f64
        })
        .collect();
    samples.sort_by(f64::total_cmp);
    samples[samples.len() / 2]
}

fn rel_err(v: Complex<f64>, reference: Complex<f64>) -> f64 {
    (v - reference).norm() / reference.norm()
}

/// Times one case with every method. The reference is the closed form in extended precision.
pub fn bench_one(case: &Case, reps: usize, min_batch: Duration) -> Result<Vec<BenchRow>> {
    let reference = complex_to_f64(case.closed::<Extended>()?);
    let ctx = PrecisionCtx::default();
    let mut rows = Vec::with_capacity(Method::ALL.len());
    for method in Method::ALL {
        let (value, terms) = match method {
            Method::Closed => (case.closed::<f64>()?, 0),
            Method::Series => match case.series(&ctx) {
                Ok(r) => (r.value, r.terms_used),
                Err(Error::NotConverged(r)) => (r.value, r.terms_used),
                Err(e) => return Err(e),
            },
            Method::Contour => (case.contour()?.value, 0),
        };
        let nanos = match method {
            Method::Closed => time_per_eval(reps, min_batch, || case.closed::<f64>()),
            Method::Series => time_per_eval(reps, min_batch, || case.series(&ctx)),
            Method::Contour => time_per_eval(reps, min_batch, || case.contour()),
        };
        rows.push(BenchRow {
            family: case.family,
            l: case.l,
            t_or_z: case.t.re,
            method,
            nanos_per_eval: nanos,
            rel_err_vs_extended: rel_err(value, reference),
            terms_used: terms,
        });
    }
    Ok(rows)
}

/// Runs the grid in a fixed order: family, then `l`, then point, then method.
pub fn run_bench(cfg: &BenchConfig) -> Result<Vec<BenchRow>> {
    let mut rows = Vec::new();
    for &family in &cfg.families {
        for &l in &cfg.ls {
            let l = l.max(family.min_l());
            for &t in &cfg.points {
                rows.extend(bench_one(&bench_case(family, l, t), cfg.reps, cfg.min_batch)?);
            }
        }
    }
    Ok(rows)
}

pub const CSV_HEADER: &str = "family,l,t_or_z,method,nanos_per_eval,rel_err_vs_extended,terms_used";

pub fn write_bench_csv<W: Write>(rows: &[BenchRow], mut out: W) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{:.1},{:.3e},{}",
            r.family,
            r.l,
            r.t_or_z,
            r.method.name(),
            r.nanos_per_eval,
            r.rel_err_vs_extended,
            r.terms_used
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_case_yields_a_row_per_method() {
        let rows = bench_one(&bench_case(Family::Legendre, 5, 0.9), 5, Duration::ZERO).unwrap();
        let methods: Vec<&str> = rows.iter().map(|r| r.method.name()).collect();
        assert_eq!(methods, ["closed", "series", "contour"]);
        assert!(rows[1].terms_used > 100);
        assert!(rows.iter().all(|r| r.nanos_per_eval > 0.0));
        assert!(rows[0].rel_err_vs_extended < 1e-13);
    }

    #[test]
    fn series_work_grows_toward_the_boundary() {
        let cfg = BenchConfig {
            families: vec![Family::Gegenbauer, Family::Mehler],
            ls: vec![2],
            points: vec![0.1, 0.5, 0.9],
            reps: 3,
            min_batch: Duration::ZERO,
        };
        let rows = run_bench(&cfg).unwrap();
        assert_eq!(rows.len(), 2 * 3 * 3);
        for fam in rows.chunks(9) {
            let terms: Vec<usize> = fam.iter().filter(|r| r.method == Method::Series).map(|r| r.terms_used).collect();
            assert!(terms.windows(2).all(|w| w[0] < w[1]), "{terms:?}");
        }
    }

    #[test]
    fn csv_schema() {
        let rows = bench_one(&bench_case(Family::ChebyshevT, 1, 0.5), 1, Duration::ZERO).unwrap();
        let mut buf = Vec::new();
        write_bench_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines.len(), 4);
        assert!(lines[1].starts_with("chebyshev_t,1,0.5,closed,"));
        assert!(lines.iter().all(|l| l.split(',').count() == 7));
    }
}
