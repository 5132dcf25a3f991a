//! Cauchy-integral evaluation of polynomial values and of the binomially
//! weighted series, by the trapezoid rule on circles.
//!
//! The integrands are analytic and periodic in the angle, so the uniform rule
//! converges geometrically in the node count.

use num_complex::Complex;

use crate::closed::MehlerPoint;
use crate::error::{Error, Result};
use crate::genfn::{
    check_cosine, check_real, gen_chebyshev_log, gen_chebyshev_t, gen_gegenbauer, gen_hermite, gen_laguerre, gen_mehler,
};
use crate::poly::PolyFamily;
use crate::scalar::{factorial, is_finite, Real};

/// Largest accepted ratio of the imaginary part to the mean integrand modulus
/// when the exact result is real.
pub const IMAGINARY_RESIDUE_LIMIT: f64 = 1e-8;

pub const DEFAULT_NODES: usize = 256;

/// A circle `|s| = radius` sampled at `nodes` equispaced points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourSpec {
    pub radius: f64,
    pub nodes: usize,
}

impl ContourSpec {
    pub fn new(radius: f64, nodes: usize) -> Result<Self> {
        let c = Self { radius, nodes };
        c.validate()?;
        Ok(c)
    }

    /// `min(0.5, (1 - |t|) / 2)` with the default node count.
    pub fn for_point(t_abs: f64) -> Self {
        Self { radius: (0.5f64).min((1.0 - t_abs) / 2.0), nodes: DEFAULT_NODES }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.radius > 0.0 && self.radius < 1.0) {
            return Err(Error::Domain(format!("contour radius must lie in (0, 1), got {}", self.radius)));
        }
        if self.nodes < 16 {
            return Err(Error::InvalidParameter(format!("at least 16 nodes are required, got {}", self.nodes)));
        }
        Ok(())
    }
}

/// A quadrature value together with the mean modulus of the summed samples,
/// which sets the scale of its rounding error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourValue<T> {
    pub value: Complex<T>,
    pub abs_scale: T,
}

fn generating_function<T: Real>(family: PolyFamily<T>, t: Complex<T>, arg: T) -> Result<Complex<T>> {
    match family {
        PolyFamily::Gegenbauer(lambda) => gen_gegenbauer(lambda, t, arg),
        PolyFamily::Legendre => gen_gegenbauer(T::lit(0.5), t, arg),
        PolyFamily::ChebyshevU => gen_gegenbauer(T::one(), t, arg),
        PolyFamily::ChebyshevT => gen_chebyshev_t(t, arg),
        PolyFamily::Laguerre(alpha) => gen_laguerre(alpha, t, arg),
        PolyFamily::Hermite => gen_hermite(t, arg),
    }
}

/// The function whose `l`-th Taylor coefficient operator gives the weighted series.
/// For `ChebyshevT` this is the logarithmic generating function of `(2/n) T_n`.
fn series_function<T: Real>(family: PolyFamily<T>, t: Complex<T>, arg: T) -> Result<Complex<T>> {
    match family {
        PolyFamily::ChebyshevT => gen_chebyshev_log(t, arg),
        _ => generating_function(family, t, arg),
    }
}

fn check_arg<T: Real>(family: &PolyFamily<T>, arg: T) -> Result<()> {
    family.validate()?;
    match family {
        PolyFamily::Laguerre(_) => check_real(arg, "u"),
        PolyFamily::Hermite => check_real(arg, "x"),
        _ => check_cosine(arg),
    }
}

/// `(1/N) Σ_k f(s_k) s_k^(-n)` over `s_k = r e^{2πik/N}`, shifted by `center`.
fn trapezoid<T: Real>(
    c: &ContourSpec,
    center: Complex<T>,
    n: usize,
    mut f: impl FnMut(Complex<T>) -> Result<Complex<T>>,
) -> Result<ContourValue<T>> {
    let r = T::lit(c.radius);
    let count = T::of_usize(c.nodes);
    let step = T::TAU() / count;
    let mut sum = Complex::from(T::zero());
    let mut scale = T::zero();
    for k in 0..c.nodes {
        let theta = step * T::of_usize(k);
        let s = Complex::from_polar(r, theta);
        // s^(-n) = r^(-n) e^{-inθ}, with the angle reduced exactly modulo N
        let angle = step * T::of_usize((k * n) % c.nodes);
        let inv_pow = Complex::from_polar(r.powi(-(n as i32)), -angle);
        let term = f(center + s)? * inv_pow;
        sum += term;
        scale += term.norm();
    }
    Ok(ContourValue { value: sum / count, abs_scale: scale / count })
}

fn check_residue<T: Real>(v: &ContourValue<T>) -> Result<()> {
    let residue = (v.value.im.abs() / v.abs_scale).to_f64_lossy();
    if residue > IMAGINARY_RESIDUE_LIMIT {
        return Err(Error::QuadratureDiverged { residue });
    }
    Ok(())
}

/// `p_n(arg)` as the `n`-th Taylor coefficient of the generating function.
pub fn coefficient_by_contour<T: Real>(family: PolyFamily<T>, n: usize, arg: T, c: &ContourSpec) -> Result<Complex<T>> {
    check_arg(&family, arg)?;
    c.validate()?;
    let mut v = trapezoid(c, Complex::from(T::zero()), n, |s| generating_function(family, s, arg))?;
    check_residue(&v)?;
    if family == PolyFamily::Hermite {
        let nf = factorial::<T>(n);
        v.value *= nf;
    }
    Ok(v.value)
}

/// Like [`derivative_series_by_contour`] but also reports the quadrature scale.
pub fn derivative_series_by_contour_scaled<T: Real>(
    family: PolyFamily<T>,
    l: usize,
    t: Complex<T>,
    arg: T,
    c: &ContourSpec,
) -> Result<ContourValue<T>> {
    check_arg(&family, arg)?;
    c.validate()?;
    if !is_finite(t) {
        return Err(Error::Domain("t must be finite".into()));
    }
    if family != PolyFamily::Hermite && t.norm() + T::lit(c.radius) >= T::one() {
        return Err(Error::Domain(format!(
            "|t| + radius = {:e} must stay below 1",
            t.norm().to_f64_lossy() + c.radius
        )));
    }
    let v = trapezoid(c, t, l, |s| series_function(family, s, arg))?;
    if t.im.is_zero() {
        check_residue(&v)?;
    }
    let tl = num_traits::pow(t, l);
    let tl_abs = tl.norm();
    Ok(ContourValue { value: v.value * tl, abs_scale: v.abs_scale * tl_abs })
}

/// `Σ_{n>=l} binom(n, l) t^n c_n` as `t^l (1/N) Σ_k G(t + s_k) s_k^(-l)`.
///
/// `c_n` is `p_n(arg)`, `H_n(arg)/n!` for the Hermite family, and `(2/n) T_n(arg)`
/// for the Chebyshev-T family.
pub fn derivative_series_by_contour<T: Real>(
    family: PolyFamily<T>,
    l: usize,
    t: Complex<T>,
    arg: T,
    c: &ContourSpec,
) -> Result<Complex<T>> {
    derivative_series_by_contour_scaled(family, l, t, arg, c).map(|v| v.value)
}

/// The Mehler series `Σ_{n>=l} binom(n, l) z^n H_n(x) H_n(y) / (n! 2^n)` by the same translated contour.
pub fn mehler_series_by_contour_scaled<T: Real>(
    l: usize,
    p: &MehlerPoint<T>,
    c: &ContourSpec,
) -> Result<ContourValue<T>> {
    p.validate()?;
    c.validate()?;
    if p.z.norm() + T::lit(c.radius) >= T::one() {
        return Err(Error::Domain(format!(
            "|z| + radius = {:e} must stay below 1",
            p.z.norm().to_f64_lossy() + c.radius
        )));
    }
    let v = trapezoid(c, p.z, l, |s| gen_mehler(s, p.x, p.y))?;
    if p.z.im.is_zero() {
        check_residue(&v)?;
    }
    let zl = num_traits::pow(p.z, l);
    Ok(ContourValue { value: v.value * zl, abs_scale: v.abs_scale * zl.norm() })
}

pub fn mehler_series_by_contour<T: Real>(l: usize, p: &MehlerPoint<T>, c: &ContourSpec) -> Result<Complex<T>> {
    mehler_series_by_contour_scaled(l, p, c).map(|v| v.value)
}
