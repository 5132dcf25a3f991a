//! Generating functions of the polynomial families and of the Hermite
//! bilinear (Mehler) kernel.
//!
//! Every fractional power is taken through a logarithm of a quantity with
//! positive real part, so no evaluation crosses a branch cut for `|t| < 1`.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::poly::PolyFamily;
use crate::scalar::{exp_m1, is_finite, ln_1p, Real};

/// Below this modulus of `1 - 2wt + t^2` results are flagged as ill-conditioned.
pub const ILL_CONDITIONED_Q2: f64 = 1e-8;

/// The branch-continuous square root `q = (1 - 2wt + t^2)^(1/2)` with `q(0) = 1`
/// and the quantities derived from it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QTransform<T> {
    pub q: Complex<T>,
    /// `(w - t) / q`
    pub eta: Complex<T>,
    /// `1 / q`
    pub xi_scale: Complex<T>,
    /// `ln q` on the same branch as `q`.
    pub log_q: Complex<T>,
}

pub(crate) fn check_disk<T: Real>(t: Complex<T>, what: &str) -> Result<()> {
    if !is_finite(t) {
        return Err(Error::Domain(format!("{what} must be finite")));
    }
    if t.norm() >= T::one() {
        return Err(Error::Domain(format!("{what} must lie inside the unit disk, got |{what}| = {:e}", t.norm())));
    }
    Ok(())
}

pub(crate) fn check_real<T: Real>(v: T, what: &str) -> Result<()> {
    if !v.is_finite() {
        return Err(Error::Domain(format!("{what} must be finite")));
    }
    Ok(())
}

pub(crate) fn check_cosine<T: Real>(w: T) -> Result<()> {
    check_real(w, "w")?;
    if w.abs() > T::one() {
        return Err(Error::Domain(format!("w must lie in [-1, 1], got {w:e}")));
    }
    Ok(())
}

/// Computes `q` as `sqrt(1 - t e^{iθ}) · sqrt(1 - t e^{-iθ})` with `w = cos θ`.
///
/// Both factors have positive real part on the open unit disk, so the product
/// of principal roots is the continuous branch.
pub fn q_transform<T: Real>(t: Complex<T>, w: T) -> Result<QTransform<T>> {
    check_disk(t, "t")?;
    check_cosine(w)?;
    let sin = (T::one() - w * w).sqrt();
    let a = t * Complex::new(w, sin);
    let b = t * Complex::new(w, -sin);
    let log_q = (ln_1p(-a) + ln_1p(-b)) / T::lit(2.0);
    let q = log_q.exp();
    let q2 = (Complex::from(T::one()) - a) * (Complex::from(T::one()) - b);
    if q2.norm() < T::lit(ILL_CONDITIONED_Q2) {
        return Err(Error::IllConditioned(format!(
            "|1 - 2wt + t^2| = {:e} is below {ILL_CONDITIONED_Q2:e}",
            q2.norm()
        )));
    }
    let xi_scale = (-log_q).exp();
    let eta = (Complex::from(w) - t) * xi_scale;
    Ok(QTransform { q, eta, xi_scale, log_q })
}

/// `(1 - 2wt + t^2)^(-λ)`, the generating function of `C_n^λ(w)`.
pub fn gen_gegenbauer<T: Real>(lambda: T, t: Complex<T>, w: T) -> Result<Complex<T>> {
    PolyFamily::Gegenbauer(lambda).validate()?;
    let qt = q_transform(t, w)?;
    Ok((qt.log_q * (-(lambda + lambda))).exp())
}

/// `-ln(1 - 2wt + t^2) = Σ_{n>=1} (2/n) T_n(w) t^n`.
pub fn gen_chebyshev_log<T: Real>(t: Complex<T>, w: T) -> Result<Complex<T>> {
    let qt = q_transform(t, w)?;
    Ok(qt.log_q * T::lit(-2.0))
}

/// `(1 - wt) / (1 - 2wt + t^2) = Σ_{n>=0} T_n(w) t^n`.
pub fn gen_chebyshev_t<T: Real>(t: Complex<T>, w: T) -> Result<Complex<T>> {
    let qt = q_transform(t, w)?;
    Ok((Complex::from(T::one()) - t * w) * qt.xi_scale * qt.xi_scale)
}

/// `(1 - t)^(-α-1) exp(-ut / (1 - t))`, the generating function of `L_n^α(u)`.
pub fn gen_laguerre<T: Real>(alpha: T, t: Complex<T>, u: T) -> Result<Complex<T>> {
    PolyFamily::Laguerre(alpha).validate()?;
    check_disk(t, "t")?;
    check_real(u, "u")?;
    Ok(laguerre_kernel(alpha, t, Complex::from(u)))
}

/// Unchecked Laguerre generating function with a complex second argument.
pub(crate) fn laguerre_kernel<T: Real>(alpha: T, t: Complex<T>, u: Complex<T>) -> Complex<T> {
    let one_minus_t = Complex::from(T::one()) - t;
    let log = ln_1p(-t);
    (log * (-(alpha + T::one())) - u * t / one_minus_t).exp()
}

/// `exp(2xz - z^2) = Σ_n H_n(x) z^n / n!`.
pub fn gen_hermite<T: Real>(z: Complex<T>, x: T) -> Result<Complex<T>> {
    if !is_finite(z) {
        return Err(Error::Domain("z must be finite".into()));
    }
    check_real(x, "x")?;
    Ok(hermite_kernel(z, Complex::from(x)))
}

pub(crate) fn hermite_kernel<T: Real>(z: Complex<T>, x: Complex<T>) -> Complex<T> {
    (z * (x * T::lit(2.0) - z)).exp()
}

/// Mehler's kernel `(1 - z^2)^(-1/2) exp{[2xyz - (x^2 + y^2) z^2] / (1 - z^2)}`,
/// which sums `Σ_n H_n(x) H_n(y) z^n / (n! 2^n)`.
pub fn gen_mehler<T: Real>(z: Complex<T>, x: T, y: T) -> Result<Complex<T>> {
    check_disk(z, "z")?;
    check_real(x, "x")?;
    check_real(y, "y")?;
    let one = Complex::from(T::one());
    let one_minus_z2 = (one - z) * (one + z);
    let numer = z * (x * y * T::lit(2.0)) - z * z * (x * x + y * y);
    Ok(one_minus_z2.sqrt().inv() * (numer / one_minus_z2).exp())
}

/// Right side of the translation identity
/// `G(λ; s + t, w) = G(λ; t, w) · G(λ; s/q, (w - t)/q)` for real `s`, `t`.
pub fn gegenbauer_translated<T: Real>(lambda: T, s: T, t: T, w: T) -> Result<Complex<T>> {
    check_real(s, "s")?;
    let qt = q_transform(Complex::from(t), w)?;
    // real for real t; rounding may push |η| just past 1
    let eta = qt.eta.re.max(-T::one()).min(T::one());
    let xi = qt.xi_scale * s;
    Ok(gen_gegenbauer(lambda, Complex::from(t), w)? * gen_gegenbauer(lambda, xi, eta)?)
}

/// Right side of `S(s + t, u) = S(t, u) · S(s/(1-t), u/(1-t))` for the Laguerre
/// generating function `S` of order `α`.
pub fn laguerre_translated<T: Real>(alpha: T, s: Complex<T>, t: Complex<T>, u: T) -> Result<Complex<T>> {
    PolyFamily::Laguerre(alpha).validate()?;
    check_disk(t, "t")?;
    check_real(u, "u")?;
    let inv = (Complex::from(T::one()) - t).inv();
    let xi = s * inv;
    check_disk(xi, "s/(1-t)")?;
    Ok(laguerre_kernel(alpha, t, Complex::from(u)) * laguerre_kernel(alpha, xi, inv * u))
}

/// Right side of `W(v + z, x) = W(z, x) · W(v, x - z)` for the Hermite
/// generating function `W`.
pub fn hermite_translated<T: Real>(v: Complex<T>, z: Complex<T>, x: T) -> Result<Complex<T>> {
    if !is_finite(v) || !is_finite(z) {
        return Err(Error::Domain("v and z must be finite".into()));
    }
    check_real(x, "x")?;
    Ok(hermite_kernel(z, Complex::from(x)) * hermite_kernel(v, Complex::from(x) - z))
}

/// Mehler's kernel split as `amplitude · exp(exponent)`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct MehlerParts<T> {
    pub amplitude: Complex<T>,
    pub exponent: Complex<T>,
}

impl<T: Real> MehlerParts<T> {
    pub fn value(&self) -> Complex<T> {
        self.amplitude * self.exponent.exp()
    }
}

/// Mehler's kernel in the factored form
/// `(1-z)^(-1/2) (1+z)^(-1/2) exp{-(x-y)^2 z / (2(1-z)) + (x+y)^2 z / (2(1+z))}`,
/// which stays accurate when `1 - z` is small. `one_minus_z` is passed in so
/// callers holding `z = exp(w)` can supply it without cancellation.
pub(crate) fn mehler_parts<T: Real>(z: Complex<T>, one_minus_z: Complex<T>, x: T, y: T) -> MehlerParts<T> {
    let two = T::lit(2.0);
    let one_plus_z = Complex::from(two) - one_minus_z;
    let d = x - y;
    let s = x + y;
    let exponent = z * (one_plus_z.inv() * (s * s / two) - one_minus_z.inv() * (d * d / two));
    // principal roots of both factors; their arguments lie in (-π/2, π/2)
    let amplitude = (one_minus_z * one_plus_z).sqrt().inv();
    MehlerParts { amplitude, exponent }
}

/// `1 - exp(w)` without cancellation.
pub(crate) fn one_minus_exp<T: Real>(w: Complex<T>) -> Complex<T> {
    -exp_m1(w)
}
