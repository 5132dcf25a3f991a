//! Randomized three-way agreement checks between closed forms, the series
//! oracle and contour quadrature.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::case::{Case, Family};
use crate::error::{Error, Result};
use crate::oracle::PrecisionCtx;

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyConfig {
    pub families: Vec<Family>,
    pub cases: usize,
    pub seed: u64,
    pub tolerance: f64,
    pub l_max: usize,
    pub t_max: f64,
    pub complex: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            families: Family::ALL.to_vec(),
            cases: 100,
            seed: 0,
            tolerance: 1e-9,
            l_max: 8,
            t_max: 0.9,
            complex: false,
        }
    }
}

/// Outcome of one case: the worst pairwise relative discrepancy.
#[derive(Debug, Clone, PartialEq)]
pub struct CaseOutcome {
    pub case: Case,
    pub rel_err: f64,
    pub passed: bool,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifySummary {
    pub cases: usize,
    pub failures: usize,
    pub worst_rel_err: f64,
}

/// The `index`-th case of a run; independent of evaluation order.
pub fn draw_case(cfg: &VerifyConfig, index: usize) -> Case {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(index as u64);
    let family = cfg.families[index % cfg.families.len()];
    Case::random(family, cfg.l_max, cfg.t_max, cfg.complex, &mut rng)
}

/// Compares the three routes on one case.
///
/// Discrepancies are measured against `|series| + noise / tolerance`, where
/// `noise` is the oracle's error estimate plus the rounding scale of the
/// quadrature, so that a case fails exactly when some pair differs by more
/// than `tolerance · |series| + noise`.
pub fn check_case(case: &Case, tolerance: f64) -> CaseOutcome {
    match three_way(case, tolerance) {
        Ok(rel_err) => CaseOutcome { case: *case, rel_err, passed: rel_err <= tolerance, error: None },
        Err(e) => CaseOutcome { case: *case, rel_err: f64::INFINITY, passed: false, error: Some(e.to_string()) },
    }
}

fn three_way(case: &Case, tolerance: f64) -> Result<f64> {
    let closed = case.closed::<f64>()?;
    let series = case.series(&PrecisionCtx::extended(1e-20))?;
    let contour = case.contour()?;
    let noise = 10.0 * series.est_abs_error + 64.0 * f64::EPSILON * contour.abs_scale;
    let scale = series.value.norm() + noise / tolerance;
    let diffs =
        [(closed - series.value).norm(), (closed - contour.value).norm(), (series.value - contour.value).norm()];
    let worst = diffs.into_iter().fold(0.0f64, f64::max);
    if scale == 0.0 {
        return Ok(if worst == 0.0 { 0.0 } else { f64::INFINITY });
    }
    Ok(worst / scale)
}

pub fn run_cases(cfg: &VerifyConfig) -> Result<Vec<CaseOutcome>> {
    if cfg.families.is_empty() {
        return Err(Error::InvalidParameter("no families selected".into()));
    }
    if !(cfg.tolerance > 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance must be positive, got {}", cfg.tolerance)));
    }
    if !(cfg.t_max > 0.0 && cfg.t_max < 1.0) {
        return Err(Error::Domain(format!("t_max must lie in (0, 1), got {}", cfg.t_max)));
    }
    Ok((0..cfg.cases).into_par_iter().map(|i| check_case(&draw_case(cfg, i), cfg.tolerance)).collect())
}

pub fn summarize(outcomes: &[CaseOutcome]) -> VerifySummary {
    VerifySummary {
        cases: outcomes.len(),
        failures: outcomes.iter().filter(|o| !o.passed).count(),
        worst_rel_err: outcomes.iter().map(|o| o.rel_err).fold(0.0, f64::max),
    }
}

pub fn run_verify(cfg: &VerifyConfig) -> Result<VerifySummary> {
    run_cases(cfg).map(|o| summarize(&o))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_run_is_vacuous() {
        let cfg = VerifyConfig { cases: 0, ..VerifyConfig::default() };
        assert_eq!(run_verify(&cfg).unwrap(), VerifySummary { cases: 0, failures: 0, worst_rel_err: 0.0 });
    }

    #[test]
    fn runs_are_deterministic_and_pass() {
        let cfg = VerifyConfig { cases: 70, seed: 11, ..VerifyConfig::default() };
        let a = run_cases(&cfg).unwrap();
        let b = run_cases(&cfg).unwrap();
        assert_eq!(a, b);
        let s = summarize(&a);
        assert_eq!(s.failures, 0, "{:?}", a.iter().find(|o| !o.passed));
        let complex = VerifyConfig { complex: true, ..cfg };
        let s = run_verify(&complex).unwrap();
        assert_eq!(s.failures, 0);
    }

    #[test]
    fn families_rotate_through_the_filter() {
        let cfg = VerifyConfig { families: vec![Family::Hermite, Family::Mehler], ..VerifyConfig::default() };
        let fams: Vec<Family> = (0..4).map(|i| draw_case(&cfg, i).family).collect();
        assert_eq!(fams, vec![Family::Hermite, Family::Mehler, Family::Hermite, Family::Mehler]);
    }

    #[test]
    fn a_wrong_value_is_reported() {
        let mut case = draw_case(&VerifyConfig::default(), 0);
        case.t = num_complex::Complex::new(1.2, 0.0);
        let o = check_case(&case, 1e-9);
        assert!(!o.passed && o.error.is_some());
    }

    #[test]
    fn invalid_configs_are_rejected() {
        let cfg = VerifyConfig { families: vec![], ..VerifyConfig::default() };
        assert!(run_verify(&cfg).is_err());
        let cfg = VerifyConfig { t_max: 1.0, ..VerifyConfig::default() };
        assert!(run_verify(&cfg).is_err());
    }
}
