//! Scalar abstraction shared by every numerical routine.

use std::fmt::{Debug, Display, LowerExp};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

use crate::bigfloat::BigFloat;

/// Real scalar type the library is generic over.
pub trait Real:
    Float + FloatConst + FromPrimitive + NumAssign + Debug + Display + LowerExp + Send + Sync + 'static
{
    /// Converts an `f64` literal; exact for every implementor with at least 53 mantissa bits.
    fn lit(x: f64) -> Self {
        <Self as FromPrimitive>::from_f64(x).expect("f64 is representable")
    }

    fn of_usize(n: usize) -> Self {
        <Self as FromPrimitive>::from_usize(n).expect("usize is representable")
    }

    fn to_f64_lossy(self) -> f64 {
        ToPrimitive::to_f64(&self).unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}
impl<const N: usize> Real for BigFloat<N> {}

pub(crate) fn complex_lit<T: Real>(z: Complex<f64>) -> Complex<T> {
    Complex::new(T::lit(z.re), T::lit(z.im))
}

/// Rounds both parts to `f64`.
pub fn complex_to_f64<T: Real>(z: Complex<T>) -> Complex<f64> {
    Complex::new(z.re.to_f64_lossy(), z.im.to_f64_lossy())
}

pub(crate) fn is_finite<T: Real>(z: Complex<T>) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// Principal `ln(1 + w)`, accurate for small `|w|`.
pub fn ln_1p<T: Real>(w: Complex<T>) -> Complex<T> {
    let two = T::lit(2.0);
    if w.norm_sqr() > T::lit(0.25) {
        // 1 + w is formed without cancellation here
        return Complex::new(T::one() + w.re, w.im).ln();
    }
    // |1 + w|^2 - 1 = 2 Re w + |w|^2
    let re = (two * w.re + w.norm_sqr()).ln_1p() / two;
    let im = w.im.atan2(T::one() + w.re);
    Complex::new(re, im)
}

/// `exp(w) - 1`, accurate for small `|w|`.
pub fn exp_m1<T: Real>(w: Complex<T>) -> Complex<T> {
    let (s, c) = w.im.sin_cos();
    let half_s = (w.im / T::lit(2.0)).sin();
    let re = w.re.exp_m1() * c - T::lit(2.0) * half_s * half_s;
    let im = w.re.exp() * s;
    Complex::new(re, im)
}

/// `n!` in the target type (overflows to infinity like any float).
pub(crate) fn factorial<T: Real>(n: usize) -> T {
    (2..=n).fold(T::one(), |acc, k| acc * T::of_usize(k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Extended;

    #[test]
    fn ln_1p_matches_direct_log_away_from_zero() {
        let w = Complex::new(0.3, -0.4);
        let direct = (Complex::new(1.0, 0.0) + w).ln();
        assert!((ln_1p(w) - direct).norm() < 1e-15);
    }

    #[test]
    fn small_arguments_keep_relative_accuracy() {
        let w = Complex::new(1e-12, 3e-13);
        let exact: Complex<Extended> = complex_lit::<Extended>(w);
        let ref_ln = (Complex::new(Extended::ONE, Extended::ZERO) + exact).ln();
        let ref_em1 = exact.exp() - Complex::new(Extended::ONE, Extended::ZERO);
        let got_ln = ln_1p(w);
        let got_em1 = exp_m1(w);
        let rel = |a: Complex<f64>, b: Complex<Extended>| (a - complex_to_f64(b)).norm() / complex_to_f64(b).norm();
        assert!(rel(got_ln, ref_ln) < 4e-16);
        assert!(rel(got_em1, ref_em1) < 4e-16);
    }

    #[test]
    fn branch_is_principal() {
        let w = Complex::new(-2.0, 1e-300);
        assert!((ln_1p(w).im - std::f64::consts::PI).abs() < 1e-15);
        let w = Complex::new(-2.0, -1e-300);
        assert!((ln_1p(w).im + std::f64::consts::PI).abs() < 1e-15);
    }

    #[test]
    fn factorial_values() {
        assert_eq!(factorial::<f64>(0), 1.0);
        assert_eq!(factorial::<f64>(10), 3_628_800.0);
        assert!(factorial::<f64>(171).is_infinite());
        assert!(factorial::<Extended>(171).is_finite());
    }
}
