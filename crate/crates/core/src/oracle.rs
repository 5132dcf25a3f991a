//! Brute-force summation of the binomially weighted polynomial series
//! `Σ_{n>=l} binom(n, l) t^n c_n`, used as ground truth for the closed forms.
//!
//! Summation stops once the last `tail_window` terms are all below
//! `rel_tol · |partial sum|` and at least 21 terms have been added. The
//! reported error combines a geometric tail bound, taken from the decay of
//! the term envelope across the window, with a bound on accumulated rounding.

use std::collections::VecDeque;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::genfn::{check_cosine, check_disk, check_real};
use crate::poly::{NormalizedHermite, PolyFamily, Recurrence, ScaledHermite};
use crate::scalar::{complex_lit, complex_to_f64, is_finite, Real};
use crate::Extended;

/// Minimum number of terms summed past the leading index `l`.
pub const MIN_TERMS: usize = 21;

/// Absolute floor added to every relative tolerance.
pub const ABS_FLOOR: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PrecisionMode {
    #[default]
    Standard,
    /// 256-bit software floating point (about 77 significant digits).
    Extended,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrecisionCtx {
    pub rel_tol: f64,
    pub max_terms: usize,
    pub tail_window: usize,
    pub mode: PrecisionMode,
}

impl Default for PrecisionCtx {
    fn default() -> Self {
        Self { rel_tol: 1e-14, max_terms: 100_000, tail_window: 10, mode: PrecisionMode::Standard }
    }
}

impl PrecisionCtx {
    pub fn with_rel_tol(rel_tol: f64) -> Self {
        Self { rel_tol, ..Self::default() }
    }

    pub fn extended(rel_tol: f64) -> Self {
        Self { rel_tol, mode: PrecisionMode::Extended, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) || !self.rel_tol.is_finite() {
            return Err(Error::InvalidParameter(format!("rel_tol must be positive, got {}", self.rel_tol)));
        }
        if self.tail_window < 2 {
            return Err(Error::InvalidParameter(format!("tail_window must be at least 2, got {}", self.tail_window)));
        }
        if self.max_terms == 0 {
            return Err(Error::InvalidParameter("max_terms must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport<T> {
    pub value: Complex<T>,
    pub terms_used: usize,
    pub est_abs_error: T,
    pub converged: bool,
}

impl<T: Real> EvalReport<T> {
    pub fn to_f64(&self) -> EvalReport<f64> {
        EvalReport {
            value: complex_to_f64(self.value),
            terms_used: self.terms_used,
            est_abs_error: self.est_abs_error.to_f64_lossy(),
            converged: self.converged,
        }
    }
}

/// Coefficient sequence `c_n` of a series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SeriesKind<T> {
    /// `c_n = p_n(arg)`; for the Hermite family `c_n = H_n(arg) / n!`.
    Poly { family: PolyFamily<T>, arg: T },
    /// `c_n = (2/n) T_n(w)` for `n >= 1` and `c_0 = 0`.
    ChebyshevTWeighted { w: T },
    /// `c_n = H_n(x) H_n(y) / (n! 2^n)`.
    Mehler { x: T, y: T },
}

/// One series instance: coefficients, binomial index `l` and expansion point `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesSpec<T> {
    pub kind: SeriesKind<T>,
    pub l: usize,
    pub t: Complex<T>,
}

impl<T: Real> SeriesSpec<T> {
    pub fn poly(family: PolyFamily<T>, l: usize, t: Complex<T>, arg: T) -> Self {
        Self { kind: SeriesKind::Poly { family, arg }, l, t }
    }

    pub fn chebyshev_t_weighted(l: usize, t: Complex<T>, w: T) -> Self {
        Self { kind: SeriesKind::ChebyshevTWeighted { w }, l, t }
    }

    pub fn mehler(l: usize, z: Complex<T>, x: T, y: T) -> Self {
        Self { kind: SeriesKind::Mehler { x, y }, l, t: z }
    }

    pub fn cast<U: Real>(&self) -> SeriesSpec<U> {
        let conv = |v: T| U::lit(v.to_f64_lossy());
        let kind = match self.kind {
            SeriesKind::Poly { family, arg } => SeriesKind::Poly { family: family.cast(), arg: conv(arg) },
            SeriesKind::ChebyshevTWeighted { w } => SeriesKind::ChebyshevTWeighted { w: conv(w) },
            SeriesKind::Mehler { x, y } => SeriesKind::Mehler { x: conv(x), y: conv(y) },
        };
        SeriesSpec { kind, l: self.l, t: complex_lit(complex_to_f64(self.t)) }
    }

    pub fn validate(&self) -> Result<()> {
        match self.kind {
            SeriesKind::Poly { family, arg } => {
                family.validate()?;
                match family {
                    PolyFamily::Hermite => {
                        if !is_finite(self.t) {
                            return Err(Error::Domain("z must be finite".into()));
                        }
                        check_real(arg, "x")?;
                    }
                    PolyFamily::Laguerre(_) => {
                        check_disk(self.t, "t")?;
                        check_real(arg, "u")?;
                    }
                    _ => {
                        check_disk(self.t, "t")?;
                        check_cosine(arg)?;
                    }
                }
            }
            SeriesKind::ChebyshevTWeighted { w } => {
                check_disk(self.t, "t")?;
                check_cosine(w)?;
            }
            SeriesKind::Mehler { x, y } => {
                check_disk(self.t, "z")?;
                check_real(x, "x")?;
                check_real(y, "y")?;
            }
        }
        Ok(())
    }

    fn coefficients(&self) -> Coefficients<T> {
        let source = match self.kind {
            SeriesKind::Poly { family: PolyFamily::Hermite, arg } => Source::Hermite(ScaledHermite::new(arg)),
            SeriesKind::Poly { family, arg } => Source::Poly(Recurrence::new(family, arg)),
            SeriesKind::ChebyshevTWeighted { w } => {
                Source::ChebyshevWeighted(Recurrence::new(PolyFamily::ChebyshevT, w))
            }
            SeriesKind::Mehler { x, y } => Source::Mehler(NormalizedHermite::new(x), NormalizedHermite::new(y)),
        };
        Coefficients { source, n: 0, pending: (T::one(), T::one()) }
    }
}

enum Source<T> {
    Poly(Recurrence<T, T>),
    Hermite(ScaledHermite<T>),
    ChebyshevWeighted(Recurrence<T, T>),
    Mehler(NormalizedHermite<T>, NormalizedHermite<T>),
}

/// Yields `(c_n, s_n)`, where `s_n >= |c_n|` is the operand scale of the
/// recurrence step that produced `c_n`. Rounding in `c_n` is relative to `s_n`.
struct Coefficients<T> {
    source: Source<T>,
    n: usize,
    pending: (T, T),
}

impl<T: Real> Iterator for Coefficients<T> {
    type Item = (T, T);

    fn next(&mut self) -> Option<(T, T)> {
        let one = T::one();
        let (value, upcoming) = match &mut self.source {
            Source::Poly(r) | Source::ChebyshevWeighted(r) => {
                let s = r.upcoming_scale();
                (r.next()?, (s, one))
            }
            Source::Hermite(h) => {
                let s = h.upcoming_scale();
                (h.next()?, (s, one))
            }
            Source::Mehler(a, b) => {
                let s = (a.upcoming_scale(), b.upcoming_scale());
                (a.next()? * b.next()?, s)
            }
        };
        let scale = self.pending.0 * self.pending.1;
        self.pending = upcoming;
        let k = self.n;
        self.n += 1;
        let (value, scale) = match self.source {
            Source::ChebyshevWeighted(_) if k == 0 => (T::zero(), T::zero()),
            Source::ChebyshevWeighted(_) => {
                let f = T::lit(2.0) / T::of_usize(k);
                (value * f, scale * f)
            }
            _ => (value, scale),
        };
        Some((value, scale.max(value.abs())))
    }
}

/// Cheap magnitude with `|z| <= mag(z) <= sqrt(2) |z|`.
fn mag<T: Real>(z: Complex<T>) -> T {
    z.re.abs() + z.im.abs()
}

/// Decay ratio `(late/early)^(1/half)` observed across the window, if below one.
fn observed_ratio<T: Real>(window: &VecDeque<T>) -> Option<T> {
    let half = window.len() / 2;
    let max_of = |it: &mut dyn Iterator<Item = &T>| it.fold(T::zero(), |m, &v| m.max(v));
    let early = max_of(&mut window.iter().take(half));
    let late = max_of(&mut window.iter().skip(window.len() - half));
    if late.is_zero() {
        return Some(T::zero());
    }
    if early.is_zero() {
        return None;
    }
    let ratio = (late / early).powf(T::one() / T::of_usize(half));
    (ratio < T::one()).then_some(ratio)
}

/// Growth ratio of `p_{n+1} = A p_n - B p_{n-1}` with `B >= 0`: the dominant
/// characteristic root where solutions are monotone, `None` where they oscillate.
fn monotone_growth<T: Real>(a: T, b: T) -> Option<T> {
    let d = a * a - T::lit(4.0) * b;
    (d >= T::zero()).then(|| (a.abs() + d.sqrt()) / T::lit(2.0))
}

/// Growth ratio of the envelope of `H_n(x) / sqrt(2^n n!)` from `n` to `n + 1`.
fn normalized_hermite_growth<T: Real>(x: T, n: usize) -> T {
    let n1 = T::of_usize(n + 1);
    let a = (T::lit(2.0) / n1).sqrt() * x;
    let b = (T::of_usize(n) / n1).sqrt();
    monotone_growth(a, b).map_or(T::one(), |g| g.max(T::one()))
}

impl<T: Real> SeriesSpec<T> {
    /// Bound on the growth of the coefficient envelope from `n` to `n + 1`.
    fn coefficient_growth(&self, n: usize) -> T {
        let one = T::one();
        let (nt, n1) = (T::of_usize(n), T::of_usize(n + 1));
        match self.kind {
            SeriesKind::Poly { family, arg } => match family {
                PolyFamily::Gegenbauer(lambda) => ((nt + lambda + lambda) / n1).max(one),
                PolyFamily::Legendre | PolyFamily::ChebyshevT => one,
                PolyFamily::ChebyshevU => (n1 + one) / n1,
                PolyFamily::Laguerre(alpha) => {
                    let a = (nt + n1 + alpha - arg) / n1;
                    let b = ((nt + alpha) / n1).max(T::zero());
                    monotone_growth(a, b).unwrap_or_else(|| ((n1 + alpha) / n1).max(one))
                }
                PolyFamily::Hermite => {
                    let a = T::lit(2.0) * arg / n1;
                    let b = T::lit(2.0) / n1;
                    monotone_growth(a, b).unwrap_or_else(|| b.sqrt())
                }
            },
            SeriesKind::ChebyshevTWeighted { .. } => one,
            SeriesKind::Mehler { x, y } => normalized_hermite_growth(x, n) * normalized_hermite_growth(y, n),
        }
    }

    /// Bound on `|a_{n+1}| / |a_n|` for the terms `a_n = binom(n, l) t^n c_n`.
    fn term_ratio(&self, n: usize) -> T {
        let binom = T::of_usize(n + 1) / T::of_usize(n + 1 - self.l);
        self.t.norm() * binom * self.coefficient_growth(n)
    }
}

/// Geometric envelope `late · ratio^j` for the terms past the current one.
struct Envelope<T> {
    late: T,
    ratio: T,
}

impl<T: Real> Envelope<T> {
    /// `Σ_{j>=1} late · ratio^j`
    fn tail(&self) -> T {
        self.late * self.ratio / (T::one() - self.ratio)
    }

    /// Bound on `Σ_{j>=1} sqrt(n + 1 + j) late · ratio^j`, the tail entering the rounding estimate.
    fn weighted_tail(&self, n: usize) -> T {
        let q = T::one() - self.ratio;
        self.tail() * (T::of_usize(n + 1) + T::one() / q).sqrt()
    }
}

/// Rounding errors per term, in units of machine epsilon, for the weight
/// update, the coefficient recurrence and the accumulation together.
const ROUNDING_UNITS: f64 = 4.0;

/// `binom(n, l) t^n` to `binom(n+1, l) t^(n+1)`.
fn continue_weight<T: Real>(weight: &mut Complex<T>, t: Complex<T>, n: usize, l: usize) {
    *weight = *weight * t * (T::of_usize(n + 1) / T::of_usize(n + 1 - l));
}

/// Sums the series in the scalar type `T`, ignoring `ctx.mode`.
///
/// The error estimate is a geometric tail bound plus a rounding bound.
/// The tail ratio is the larger of the decay observed across the window and
/// the growth admitted by the coefficient recurrence, applied to a running
/// envelope of the term magnitudes so that a window falling on zeros of an
/// oscillating sequence is not mistaken for convergence. Rounding is charged
/// at `(n+1) eps` relative to the operand scale of each recurrence step,
/// which exposes cancellation. Each part is the running minimum of bounds that
/// hold for every later stopping point, so summing further never increases
/// the estimate.
pub fn sum_series_in<T: Real>(spec: &SeriesSpec<T>, ctx: &PrecisionCtx) -> Result<EvalReport<T>> {
    ctx.validate()?;
    spec.validate()?;
    let l = spec.l;
    let t = spec.t;
    let rel_tol = T::lit(ctx.rel_tol);
    let floor = T::lit(ABS_FLOOR);
    let unit = T::epsilon() * T::lit(ROUNDING_UNITS);
    let mut coeffs = spec.coefficients();
    for _ in 0..l {
        coeffs.next();
    }
    // binom(n, l) t^n, starting at n = l
    let mut weight = (0..l).fold(Complex::from(T::one()), |acc, _| acc * t);
    let mut sum = Complex::from(T::zero());
    let mut weighted = T::zero();
    let mut tail = T::infinity();
    let mut weighted_total = T::infinity();
    let mut window: VecDeque<T> = VecDeque::with_capacity(ctx.tail_window + 1);
    // running envelopes of |a_n| and of the operand scales
    let (mut env, mut env_scale) = (T::zero(), T::zero());
    let mut ratio = T::zero();
    let min_terms = MIN_TERMS.max(ctx.tail_window);
    let report = |sum: Complex<T>, terms: usize, tail: T, weighted_total: T| {
        let est = tail + weighted_total * unit;
        let converged = est <= rel_tol * sum.norm() + floor;
        EvalReport { value: sum, terms_used: terms, est_abs_error: est, converged }
    };
    for k in 0..ctx.max_terms {
        let n = l + k;
        let (c, c_scale) = coeffs.next().expect("coefficient streams are infinite");
        let term = weight * c;
        sum += term;
        let m = mag(term);
        let ms = mag(weight) * c_scale;
        weighted += ms * T::of_usize(n + 1).sqrt();
        env = m.max(env * ratio);
        env_scale = ms.max(env_scale * ratio);
        if window.len() == ctx.tail_window {
            window.pop_front();
        }
        window.push_back(m);
        let terms = k + 1;
        ratio = spec.term_ratio(n);
        if window.len() < ctx.tail_window {
            continue_weight(&mut weight, t, n, l);
            continue;
        }
        ratio = ratio.max(observed_ratio(&window).unwrap_or(T::zero()));
        if ratio < T::one() {
            tail = tail.min(Envelope { late: env, ratio }.tail());
            let rest = Envelope { late: env_scale, ratio }.weighted_tail(n);
            weighted_total = weighted_total.min(weighted + rest);
        }
        if terms >= min_terms {
            let scale = sum.re.abs().max(sum.im.abs());
            let threshold = rel_tol * scale + floor;
            if tail <= threshold && window.iter().all(|&v| v <= threshold) {
                let r = report(sum, terms, tail, weighted_total);
                return if r.converged { Ok(r) } else { Err(Error::NotConverged(Box::new(r.to_f64()))) };
            }
        }
        if !is_finite(sum) {
            break;
        }
        continue_weight(&mut weight, t, n, l);
    }
    let mut r = report(sum, ctx.max_terms, tail, weighted_total.max(weighted));
    r.converged = false;
    Err(Error::NotConverged(Box::new(r.to_f64())))
}

/// Sums a series given in double precision, in the arithmetic selected by `ctx.mode`.
pub fn sum_series(spec: &SeriesSpec<f64>, ctx: &PrecisionCtx) -> Result<EvalReport<f64>> {
    match ctx.mode {
        PrecisionMode::Standard => sum_series_in(spec, ctx),
        PrecisionMode::Extended => sum_series_in::<Extended>(&spec.cast(), ctx).map(|r| r.to_f64()),
    }
}

/// Extended-precision summation returning the full-precision report.
pub fn sum_series_extended(spec: &SeriesSpec<f64>, ctx: &PrecisionCtx) -> Result<EvalReport<Extended>> {
    sum_series_in::<Extended>(&spec.cast(), ctx)
}

/// `Σ_{n>=l} binom(n, l) t^n (2/n) T_n(w)` for `l >= 1`.
pub fn sum_chebyshev_t_series(l: usize, t: Complex<f64>, w: f64, ctx: &PrecisionCtx) -> Result<EvalReport<f64>> {
    if l == 0 {
        return Err(Error::InvalidParameter("the weighted Chebyshev T series is defined for l >= 1".into()));
    }
    sum_series(&SeriesSpec::chebyshev_t_weighted(l, t, w), ctx)
}
