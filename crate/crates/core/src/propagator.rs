//! Propagator of the quantum harmonic oscillator, from the eigenfunction
//! expansion, from Mehler's kernel, and in explicit closed form.
//!
//! Real time differences are regularized as `Δτ = Δt - iε/ω`, which maps the
//! Mehler variable `z = exp(-iωΔτ)` strictly inside the unit disk.

use std::io::{self, Write};

use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::genfn::{mehler_parts, one_minus_exp};
use crate::oracle::EvalReport;
use crate::poly::{NormalizedHermite, DEFAULT_DEGREE_CAP};
use crate::scalar::Real;

pub const DEFAULT_EPSILON: f64 = 1e-6;

/// Relative tail bound required of a converged eigenfunction expansion.
pub const EXPANSION_REL_TOL: f64 = 1e-8;

/// `ωΔt` closer than this to a multiple of π is a caustic.
pub const CAUSTIC_GUARD: f64 = 1e-8;

/// Regularization used to fix the square-root branch of the explicit form.
pub const BRANCH_EPSILON: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorParams<T> {
    pub mass: T,
    pub omega: T,
    pub hbar: T,
    pub epsilon: T,
}

impl<T: Real> Default for OscillatorParams<T> {
    fn default() -> Self {
        Self { mass: T::one(), omega: T::one(), hbar: T::one(), epsilon: T::lit(DEFAULT_EPSILON) }
    }
}

impl<T: Real> OscillatorParams<T> {
    pub fn natural(epsilon: T) -> Self {
        Self { epsilon, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("mass", self.mass), ("omega", self.omega), ("hbar", self.hbar), ("epsilon", self.epsilon)] {
            if !(v > T::zero()) || !v.is_finite() {
                return Err(Error::InvalidParameter(format!("{name} must be positive and finite, got {v:e}")));
            }
        }
        Ok(())
    }

    /// `sqrt(m ω / ħ)`, the inverse oscillator length.
    pub fn alpha(&self) -> T {
        (self.mass * self.omega / self.hbar).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpacetimePoint<T> {
    pub x_b: T,
    pub t_b: T,
    pub x_a: T,
    pub t_a: T,
}

impl<T: Real> SpacetimePoint<T> {
    pub fn new(x_b: T, t_b: T, x_a: T, t_a: T) -> Result<Self> {
        let p = Self { x_b, t_b, x_a, t_a };
        if [x_b, t_b, x_a, t_a].iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("spacetime coordinates must be finite".into()));
        }
        Ok(p)
    }

    pub fn dt(&self) -> T {
        self.t_b - self.t_a
    }
}

/// `u_n(x)` for `n = 0, 1, ...`, with the Gaussian factor carried as a
/// separate exponent so that large `|αx|` neither underflows nor overflows.
struct Eigenfunctions<T> {
    inner: NormalizedHermite<T>,
    log_scale: T,
}

impl<T: Real> Eigenfunctions<T> {
    fn new(alpha: T, x: T) -> Self {
        let xi = alpha * x;
        // sqrt(α / sqrt(π)) folded into the exponent
        let log_norm = (alpha.ln() - T::PI().ln() / T::lit(2.0)) / T::lit(2.0);
        Self { inner: NormalizedHermite::new(xi), log_scale: log_norm - xi * xi / T::lit(2.0) }
    }

    /// The next value as `(mantissa, exponent)`, meaning `mantissa · e^exponent`.
    fn next_parts(&mut self) -> (T, T) {
        let m = self.inner.next().expect("infinite sequence");
        let out = (m, self.log_scale);
        let limit = T::lit(1e150);
        if m.abs() > limit {
            self.inner.rescale(limit.recip());
            self.log_scale += limit.ln();
        }
        out
    }
}

fn check_degree(n: usize) -> Result<()> {
    if n > DEFAULT_DEGREE_CAP {
        return Err(Error::DegreeCapExceeded { degree: n, cap: DEFAULT_DEGREE_CAP });
    }
    Ok(())
}

/// Normalized energy eigenfunction `u_n(x)`.
pub fn eigenfunction<T: Real>(params: &OscillatorParams<T>, n: usize, x: T) -> Result<T> {
    params.validate()?;
    check_degree(n)?;
    if !x.is_finite() {
        return Err(Error::Domain("x must be finite".into()));
    }
    let mut seq = Eigenfunctions::new(params.alpha(), x);
    for _ in 0..n {
        seq.next_parts();
    }
    let (m, e) = seq.next_parts();
    Ok(m * e.exp())
}

/// `-iωΔτ = -iωΔt - ε`.
fn mehler_exponent<T: Real>(params: &OscillatorParams<T>, dt: T, epsilon: T) -> Complex<T> {
    Complex::new(-epsilon, -params.omega * dt)
}

/// Upper bound on the expansion tail beyond `n_max`, from `|u_n| <= sqrt(α) π^(-1/4)`.
fn expansion_tail<T: Real>(alpha: T, epsilon: T, n_max: usize) -> T {
    let decay = -(-epsilon).exp_m1();
    alpha / T::PI().sqrt() * (-epsilon * T::of_usize(n_max + 1)).exp() / decay
}

fn expansion_terms<T: Real>(
    params: &OscillatorParams<T>,
    pt: &SpacetimePoint<T>,
    n_max: usize,
    stop: Option<T>,
) -> Result<EvalReport<T>> {
    params.validate()?;
    check_degree(n_max)?;
    let alpha = params.alpha();
    let w = mehler_exponent(params, pt.dt(), params.epsilon);
    let mut ub = Eigenfunctions::new(alpha, pt.x_b);
    let mut ua = Eigenfunctions::new(alpha, pt.x_a);
    let mut sum = Complex::from(T::zero());
    for n in 0..=n_max {
        let (mb, eb) = ub.next_parts();
        let (ma, ea) = ua.next_parts();
        let phase = w * (T::of_usize(n) + T::lit(0.5)) + (eb + ea);
        sum += phase.exp() * (mb * ma);
        let tail = expansion_tail(alpha, params.epsilon, n);
        if let Some(rel) = stop {
            if tail <= rel * sum.norm() {
                return Ok(EvalReport { value: sum, terms_used: n + 1, est_abs_error: tail, converged: true });
            }
        }
    }
    let tail = expansion_tail(alpha, params.epsilon, n_max);
    let converged = tail <= T::lit(EXPANSION_REL_TOL) * sum.norm() && stop.is_none();
    Ok(EvalReport { value: sum, terms_used: n_max + 1, est_abs_error: tail, converged })
}

/// `Σ_{n<=n_max} exp(-iE_nΔτ/ħ) u_n(x_b) u_n(x_a)` with `E_n = ħω(n + 1/2)`.
///
/// Fails with `NotConverged` unless the tail bound is below
/// [`EXPANSION_REL_TOL`] relative to the partial sum.
pub fn propagator_expansion<T: Real>(
    params: &OscillatorParams<T>,
    pt: &SpacetimePoint<T>,
    n_max: usize,
) -> Result<EvalReport<T>> {
    let r = expansion_terms(params, pt, n_max, None)?;
    if r.converged {
        Ok(r)
    } else {
        Err(Error::NotConverged(Box::new(r.to_f64())))
    }
}

/// The expansion summed until its tail bound falls below `rel_tol` relative
/// to the partial sum, using at most `n_cap + 1` terms.
pub fn propagator_expansion_adaptive<T: Real>(
    params: &OscillatorParams<T>,
    pt: &SpacetimePoint<T>,
    rel_tol: T,
    n_cap: usize,
) -> Result<EvalReport<T>> {
    let r = expansion_terms(params, pt, n_cap, Some(rel_tol))?;
    if r.converged {
        Ok(r)
    } else {
        Err(Error::NotConverged(Box::new(r.to_f64())))
    }
}

fn compact<T: Real>(params: &OscillatorParams<T>, pt: &SpacetimePoint<T>, epsilon: T) -> Complex<T> {
    let alpha = params.alpha();
    let w = mehler_exponent(params, pt.dt(), epsilon);
    let z = w.exp();
    let (xb, xa) = (alpha * pt.x_b, alpha * pt.x_a);
    let parts = mehler_parts(z, one_minus_exp(w), xb, xa);
    let exponent = w / T::lit(2.0) - (xb * xb + xa * xa) / T::lit(2.0) + parts.exponent;
    parts.amplitude * exponent.exp() * (alpha / T::PI().sqrt())
}

/// `(α/√π) exp[-iωΔτ/2 - α²(x_b² + x_a²)/2] M_0(exp(-iωΔτ), αx_b, αx_a)`.
pub fn propagator_mehler<T: Real>(params: &OscillatorParams<T>, pt: &SpacetimePoint<T>) -> Result<Complex<T>> {
    params.validate()?;
    Ok(compact(params, pt, params.epsilon))
}

/// The explicit propagator
/// `{mω / (2πiħ sin ωΔt)}^(1/2) exp{imω[(x_b² + x_a²) cos ωΔt - 2x_b x_a] / (2ħ sin ωΔt)}`.
///
/// The root is the one continuous with the regularized Mehler form, which
/// is the principal root for `0 < ωΔt < π`. The regularizer is not used.
pub fn propagator_explicit<T: Real>(params: &OscillatorParams<T>, pt: &SpacetimePoint<T>) -> Result<Complex<T>> {
    params.validate()?;
    let phi = params.omega * pt.dt();
    let k = (phi / T::PI()).round();
    if (phi - k * T::PI()).abs() < T::lit(CAUSTIC_GUARD) {
        return Err(Error::IllConditioned(format!("ωΔt = {phi:e} is within {CAUSTIC_GUARD:e} of a multiple of π")));
    }
    let (sin, cos) = phi.sin_cos();
    let c = params.mass * params.omega / (params.hbar * sin);
    let mut root = (Complex::new(T::zero(), -c) / T::TAU()).sqrt();
    // sign of the root from the regularized Mehler prefactor
    let w = mehler_exponent(params, pt.dt(), T::lit(BRANCH_EPSILON));
    let one_minus_z = one_minus_exp(w);
    let one_plus_z = Complex::from(T::lit(2.0)) - one_minus_z;
    let reference = (w / T::lit(2.0)).exp() / (one_minus_z * one_plus_z).sqrt();
    if (root.conj() * reference).re < T::zero() {
        root = -root;
    }
    let (xb, xa) = (pt.x_b, pt.x_a);
    let quad = (xb * xb + xa * xa) * cos - T::lit(2.0) * xb * xa;
    let exponent = Complex::new(T::zero(), c * quad / T::lit(2.0));
    Ok(root * exponent.exp())
}

/// One row of a propagator grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridRow<T> {
    pub x_b: T,
    pub re: T,
    pub im: T,
    pub abs: T,
}

/// `K(x_b, t; x_a, 0)` on `n_points` equispaced `x_b` in `[x_min, x_max]`.
///
/// Uses the explicit form, and the regularized Mehler form at caustics.
pub fn propagator_grid<T: Real>(
    params: &OscillatorParams<T>,
    time: T,
    x_a: T,
    x_range: (T, T),
    n_points: usize,
) -> Result<Vec<GridRow<T>>> {
    params.validate()?;
    let (lo, hi) = x_range;
    if n_points == 0 {
        return Err(Error::InvalidParameter("n_points must be positive".into()));
    }
    if !lo.is_finite() || !hi.is_finite() || hi < lo {
        return Err(Error::Domain("x range must be finite with x_min <= x_max".into()));
    }
    let step = if n_points > 1 { (hi - lo) / T::of_usize(n_points - 1) } else { T::zero() };
    (0..n_points)
        .into_par_iter()
        .map(|i| {
            let x_b = lo + step * T::of_usize(i);
            let pt = SpacetimePoint::new(x_b, time, x_a, T::zero())?;
            let k = match propagator_explicit(params, &pt) {
                Err(Error::IllConditioned(_)) => propagator_mehler(params, &pt),
                other => other,
            }?;
            Ok(GridRow { x_b, re: k.re, im: k.im, abs: k.norm() })
        })
        .collect()
}

/// Writes grid rows as CSV with 17 significant digits.
pub fn write_grid_csv<T: Real, W: Write>(rows: &[GridRow<T>], mut out: W) -> io::Result<()> {
    writeln!(out, "x_b,re,im,abs")?;
    for r in rows {
        writeln!(
            out,
            "{:.16e},{:.16e},{:.16e},{:.16e}",
            r.x_b.to_f64_lossy(),
            r.re.to_f64_lossy(),
            r.im.to_f64_lossy(),
            r.abs.to_f64_lossy()
        )?;
    }
    Ok(())
}
