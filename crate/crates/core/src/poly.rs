//! Classical orthogonal polynomials by forward three-term recurrence.
//!
//! All families are evaluated at complex arguments. The forward recurrences
//! are stable for arguments of modest size (|arg| = O(1) for the Jacobi-type
//! families, moderate |u| and |x| for Laguerre and Hermite); outside that
//! regime the result loses relative accuracy as the degree grows.

use std::marker::PhantomData;
use std::ops::{Add, Div, Mul, Sub};

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{is_finite, Real};

/// Largest degree accepted by [`eval_poly`] and [`eval_poly_sequence`].
pub const DEFAULT_DEGREE_CAP: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PolyFamily<T> {
    /// `C_n^λ`, with `λ > -1/2` and `λ != 0`.
    Gegenbauer(T),
    Legendre,
    ChebyshevT,
    ChebyshevU,
    /// `L_n^α`, with `α > -1`.
    Laguerre(T),
    Hermite,
}

impl<T: Real> PolyFamily<T> {
    pub fn validate(&self) -> Result<()> {
        match *self {
            PolyFamily::Gegenbauer(lambda) => {
                if !(lambda > T::lit(-0.5)) || !lambda.is_finite() {
                    return Err(Error::InvalidParameter(format!("Gegenbauer order must exceed -1/2, got {lambda:e}")));
                }
                if lambda.is_zero() {
                    return Err(Error::InvalidParameter(
                        "Gegenbauer order 0 is served by the Chebyshev T family".into(),
                    ));
                }
            }
            PolyFamily::Laguerre(alpha) if (!(alpha > -T::one()) || !alpha.is_finite()) => {
                return Err(Error::InvalidParameter(format!("Laguerre order must exceed -1, got {alpha:e}")));
            }
            _ => {}
        }
        Ok(())
    }

    pub fn name(&self) -> &'static str {
        match self {
            PolyFamily::Gegenbauer(_) => "gegenbauer",
            PolyFamily::Legendre => "legendre",
            PolyFamily::ChebyshevT => "chebyshev_t",
            PolyFamily::ChebyshevU => "chebyshev_u",
            PolyFamily::Laguerre(_) => "laguerre",
            PolyFamily::Hermite => "hermite",
        }
    }

    /// The same family with its order parameter converted to another scalar type.
    pub fn cast<U: Real>(&self) -> PolyFamily<U> {
        let conv = |v: T| U::lit(v.to_f64_lossy());
        match *self {
            PolyFamily::Gegenbauer(l) => PolyFamily::Gegenbauer(conv(l)),
            PolyFamily::Legendre => PolyFamily::Legendre,
            PolyFamily::ChebyshevT => PolyFamily::ChebyshevT,
            PolyFamily::ChebyshevU => PolyFamily::ChebyshevU,
            PolyFamily::Laguerre(a) => PolyFamily::Laguerre(conv(a)),
            PolyFamily::Hermite => PolyFamily::Hermite,
        }
    }
}

/// Values the recurrence can run over: the real scalar itself or its complex extension.
pub trait RecurrenceValue<T>:
    Copy
    + From<T>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Mul<T, Output = Self>
    + Div<T, Output = Self>
{
}

impl<T: Real> RecurrenceValue<T> for T {}
impl<T: Real> RecurrenceValue<T> for Complex<T> {}

/// Infinite iterator over `p_0(x), p_1(x), ...` for one family.
///
/// The family parameter is not validated here.
#[derive(Debug, Clone)]
pub struct Recurrence<T, V> {
    family: PolyFamily<T>,
    x: V,
    n: usize,
    prev: V,
    cur: V,
}

impl<T: Real, V: RecurrenceValue<T>> Recurrence<T, V> {
    pub fn new(family: PolyFamily<T>, x: V) -> Self {
        let one = V::from(T::one());
        Self { family, x, n: 0, prev: V::from(T::zero()), cur: one }
    }

    fn seed_one(&self) -> V {
        let x = self.x;
        let one = V::from(T::one());
        match self.family {
            PolyFamily::Gegenbauer(lambda) => x * (lambda + lambda),
            PolyFamily::Legendre | PolyFamily::ChebyshevT => x,
            PolyFamily::ChebyshevU | PolyFamily::Hermite => x * T::lit(2.0),
            PolyFamily::Laguerre(alpha) => one * (T::one() + alpha) - x,
        }
    }

    /// `p_{n+1}` from `p_n = cur` and `p_{n-1} = prev`, for `n >= 1`.
    fn step(&self) -> V {
        let (x, p, pm) = (self.x, self.cur, self.prev);
        let n = T::of_usize(self.n);
        let n1 = n + T::one();
        match self.family {
            PolyFamily::Gegenbauer(lambda) => {
                (x * p * ((n + lambda) * T::lit(2.0)) - pm * (n + lambda + lambda - T::one())) / n1
            }
            PolyFamily::Legendre => (x * p * (n + n1) - pm * n) / n1,
            PolyFamily::ChebyshevT | PolyFamily::ChebyshevU => x * p * T::lit(2.0) - pm,
            PolyFamily::Laguerre(alpha) => {
                let c = V::from(n + n1 + alpha) - x;
                (c * p - pm * (n + alpha)) / n1
            }
            PolyFamily::Hermite => x * p * T::lit(2.0) - pm * (n + n),
        }
    }
}

impl<T: Real> Recurrence<T, T> {
    /// Sum of the operand magnitudes combined by the next call to `next`.
    ///
    /// Comparing it with the value produced measures the cancellation in that step.
    pub(crate) fn upcoming_scale(&self) -> T {
        let (x, p, pm) = (self.x.abs(), self.cur.abs(), self.prev.abs());
        let n = T::of_usize(self.n);
        let n1 = n + T::one();
        let two = T::lit(2.0);
        match self.family {
            PolyFamily::Gegenbauer(lambda) => {
                (x * p * ((n + lambda) * two).abs() + pm * (n + lambda + lambda - T::one()).abs()) / n1
            }
            PolyFamily::Legendre => (x * p * (n + n1) + pm * n) / n1,
            PolyFamily::ChebyshevT if self.n == 0 => x,
            PolyFamily::ChebyshevT | PolyFamily::ChebyshevU => x * p * two + pm,
            PolyFamily::Laguerre(alpha) => ((n + n1 + alpha).abs() + x) * p / n1 + pm * (n + alpha).abs() / n1,
            PolyFamily::Hermite => x * p * two + pm * (n + n),
        }
    }
}

impl<T: Real, V: RecurrenceValue<T>> Iterator for Recurrence<T, V> {
    type Item = V;

    fn next(&mut self) -> Option<V> {
        let out = self.cur;
        let next = if self.n == 0 { self.seed_one() } else { self.step() };
        self.prev = self.cur;
        self.cur = next;
        self.n += 1;
        Some(out)
    }
}

fn check(family: &PolyFamily<impl Real>, n: usize, cap: usize) -> Result<()> {
    family.validate()?;
    if n > cap {
        return Err(Error::DegreeCapExceeded { degree: n, cap });
    }
    Ok(())
}

fn check_arg<T: Real>(arg: Complex<T>) -> Result<()> {
    if !is_finite(arg) {
        return Err(Error::Domain("polynomial argument must be finite".into()));
    }
    Ok(())
}

/// Evaluates `p_n(arg)`.
pub fn eval_poly<T: Real>(family: PolyFamily<T>, n: usize, arg: Complex<T>) -> Result<Complex<T>> {
    eval_poly_capped(family, n, arg, DEFAULT_DEGREE_CAP)
}

pub fn eval_poly_capped<T: Real>(family: PolyFamily<T>, n: usize, arg: Complex<T>, cap: usize) -> Result<Complex<T>> {
    check(&family, n, cap)?;
    check_arg(arg)?;
    Ok(Recurrence::new(family, arg).nth(n).expect("recurrence is infinite"))
}

/// Evaluates `p_0(arg), ..., p_{n_max}(arg)` in one pass.
///
/// Element `k` is bit-for-bit identical to `eval_poly(family, k, arg)`.
pub fn eval_poly_sequence<T: Real>(family: PolyFamily<T>, n_max: usize, arg: Complex<T>) -> Result<Vec<Complex<T>>> {
    check(&family, n_max, DEFAULT_DEGREE_CAP)?;
    check_arg(arg)?;
    Ok(Recurrence::new(family, arg).take(n_max + 1).collect())
}

/// `H_n(x) / n!` by the rescaled Hermite recurrence.
#[derive(Debug, Clone)]
pub(crate) struct ScaledHermite<T, V = T> {
    x: V,
    n: usize,
    prev: V,
    cur: V,
    _scalar: PhantomData<T>,
}

impl<T: Real, V: RecurrenceValue<T>> ScaledHermite<T, V> {
    pub fn new(x: V) -> Self {
        Self { x, n: 0, prev: V::from(T::zero()), cur: V::from(T::one()), _scalar: PhantomData }
    }
}

impl<T: Real> ScaledHermite<T, T> {
    pub(crate) fn upcoming_scale(&self) -> T {
        T::lit(2.0) * (self.x.abs() * self.cur.abs() + self.prev.abs()) / T::of_usize(self.n + 1)
    }
}

impl<T: Real, V: RecurrenceValue<T>> Iterator for ScaledHermite<T, V> {
    type Item = V;

    fn next(&mut self) -> Option<V> {
        let out = self.cur;
        let two = T::lit(2.0);
        // h_{n+1} = (2x h_n - 2 h_{n-1}) / (n+1)
        let next = (self.x * self.cur * two - self.prev * two) / T::of_usize(self.n + 1);
        self.prev = self.cur;
        self.cur = next;
        self.n += 1;
        Some(out)
    }
}

/// `H_n(x) / sqrt(2^n n!)` by the normalized Hermite recurrence.
///
/// The magnitude grows at most like `exp(x^2 / 2)` in `n`, so the sequence
/// stays finite wherever that factor does.
#[derive(Debug, Clone)]
pub(crate) struct NormalizedHermite<T> {
    x: T,
    n: usize,
    prev: T,
    cur: T,
}

impl<T: Real> NormalizedHermite<T> {
    pub fn new(x: T) -> Self {
        Self { x, n: 0, prev: T::zero(), cur: T::one() }
    }

    /// Applies a common factor to the pending recurrence state.
    pub fn rescale(&mut self, factor: T) {
        self.prev *= factor;
        self.cur *= factor;
    }

    pub(crate) fn upcoming_scale(&self) -> T {
        let n1 = T::of_usize(self.n + 1);
        let a = (T::lit(2.0) / n1).sqrt();
        let b = (T::of_usize(self.n) / n1).sqrt();
        a * self.x.abs() * self.cur.abs() + b * self.prev.abs()
    }
}

impl<T: Real> Iterator for NormalizedHermite<T> {
    type Item = T;

    fn next(&mut self) -> Option<T> {
        let out = self.cur;
        let n1 = T::of_usize(self.n + 1);
        let a = (T::lit(2.0) / n1).sqrt();
        let b = (T::of_usize(self.n) / n1).sqrt();
        let next = a * self.x * self.cur - b * self.prev;
        self.prev = self.cur;
        self.cur = next;
        self.n += 1;
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Extended;
    use proptest::prelude::*;

    fn c(re: f64) -> Complex<f64> {
        Complex::new(re, 0.0)
    }

    #[test]
    fn low_degree_values() {
        assert_eq!(eval_poly(PolyFamily::Legendre, 2, c(1.0)).unwrap(), c(1.0));
        assert_eq!(eval_poly(PolyFamily::ChebyshevU, 2, c(0.5)).unwrap(), c(0.0));
        assert_eq!(eval_poly(PolyFamily::Hermite, 2, c(0.0)).unwrap(), c(-2.0));
        assert_eq!(eval_poly_sequence(PolyFamily::ChebyshevT, 3, c(1.0)).unwrap(), vec![c(1.0); 4]);
        assert_eq!(eval_poly_sequence(PolyFamily::Laguerre(0.0), 1, c(0.0)).unwrap(), vec![c(1.0), c(1.0)]);
        assert_eq!(eval_poly_sequence(PolyFamily::Hermite, 3, c(1.0)).unwrap(), vec![c(1.0), c(2.0), c(2.0), c(-4.0)]);
    }

    #[test]
    fn gegenbauer_matches_extended_recurrence() {
        // C_7^0.7(0.3) in 256-bit arithmetic
        let ext = eval_poly(
            PolyFamily::Gegenbauer(Extended::from_f64(0.7)),
            7,
            Complex::new(Extended::from_f64(0.3), Extended::ZERO),
        )
        .unwrap();
        let reference = ext.re.to_f64();
        let got = eval_poly(PolyFamily::Gegenbauer(0.7), 7, c(0.3)).unwrap();
        assert!(((got.re - reference) / reference).abs() < 1e-12);
        assert_eq!(got.im, 0.0);
        // the f64 literal itself, from the explicit hypergeometric sum
        // C_7^λ(x) = Σ_k (-1)^k Γ(7-k+λ)/(Γ(λ) k! (7-2k)!) (2x)^(7-2k)
        let lambda = 0.7f64;
        let poch = |a: f64, m: usize| (0..m).fold(1.0, |p, j| p * (a + j as f64));
        let fact = |m: usize| (1..=m).fold(1.0, |p, j| p * j as f64);
        let explicit: f64 = (0..=3)
            .map(|k| {
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                sign * poch(lambda, 7 - k) / (fact(k) * fact(7 - 2 * k)) * (0.6f64).powi(7 - 2 * k as i32)
            })
            .sum();
        assert!(((explicit - reference) / reference).abs() < 1e-13);
    }

    #[test]
    fn complex_arguments_follow_polynomial_identities() {
        let z = Complex::new(0.4, -1.3);
        let h3 = eval_poly(PolyFamily::Hermite, 3, z).unwrap();
        assert!((h3 - (z * z * z * 8.0 - z * 12.0)).norm() < 1e-13);
        let l2 = eval_poly(PolyFamily::Laguerre(0.5), 2, z).unwrap();
        // L_2^α(x) = (α+1)(α+2)/2 - (α+2)x + x²/2
        let expect = c(1.5 * 2.5 / 2.0) - z * 2.5 + z * z / 2.0;
        assert!((l2 - expect).norm() < 1e-14);
    }

    #[test]
    fn parameter_errors() {
        let bad = eval_poly(PolyFamily::Gegenbauer(0.0), 3, c(0.1));
        assert!(matches!(bad, Err(Error::InvalidParameter(_))));
        let bad = eval_poly(PolyFamily::Gegenbauer(-0.5), 3, c(0.1));
        assert!(matches!(bad, Err(Error::InvalidParameter(_))));
        let bad = eval_poly(PolyFamily::Laguerre(-1.0), 3, c(0.1));
        assert!(matches!(bad, Err(Error::InvalidParameter(_))));
        let bad = eval_poly(PolyFamily::Legendre, 10_001, c(0.1));
        assert_eq!(bad, Err(Error::DegreeCapExceeded { degree: 10_001, cap: 10_000 }));
        let bad = eval_poly_capped(PolyFamily::Legendre, 11, c(0.1), 10);
        assert_eq!(bad, Err(Error::DegreeCapExceeded { degree: 11, cap: 10 }));
        let bad = eval_poly(PolyFamily::Legendre, 1, Complex::new(f64::NAN, 0.0));
        assert!(matches!(bad, Err(Error::Domain(_))));
    }

    #[test]
    fn chebyshev_trigonometric_forms() {
        for i in 0..=50 {
            let theta = 0.01 + (std::f64::consts::PI - 0.02) * i as f64 / 50.0;
            let w = theta.cos();
            let t = eval_poly_sequence(PolyFamily::ChebyshevT, 100, c(w)).unwrap();
            let u = eval_poly_sequence(PolyFamily::ChebyshevU, 100, c(w)).unwrap();
            for n in 0..=100 {
                let nf = n as f64;
                assert!((t[n].re - (nf * theta).cos()).abs() < 1e-11);
                let expect = ((nf + 1.0) * theta).sin() / theta.sin();
                assert!((u[n].re - expect).abs() < 1e-11, "U_{n}({w})");
            }
        }
    }

    #[test]
    fn special_orders_reduce_to_named_families() {
        for i in 0..=40 {
            let w = -1.0 + 2.0 * i as f64 / 40.0;
            let half = eval_poly_sequence(PolyFamily::Gegenbauer(0.5), 100, c(w)).unwrap();
            let leg = eval_poly_sequence(PolyFamily::Legendre, 100, c(w)).unwrap();
            let one = eval_poly_sequence(PolyFamily::Gegenbauer(1.0), 100, c(w)).unwrap();
            let u = eval_poly_sequence(PolyFamily::ChebyshevU, 100, c(w)).unwrap();
            for n in 0..=100 {
                // both families peak at w = ±1 with |p_n(1)| >= 1
                let scale = leg[n].norm().max(1.0);
                assert!((half[n] - leg[n]).norm() / scale < 1e-13);
                let scale = u[n].norm().max(1.0);
                assert!((one[n] - u[n]).norm() / scale < 1e-13);
            }
        }
    }

    #[test]
    fn vanishing_order_limit_gives_chebyshev_t() {
        let lambda = 1e-6;
        for &w in &[-0.9, -0.3, 0.2, 0.77] {
            let g = eval_poly_sequence(PolyFamily::Gegenbauer(lambda), 20, c(w)).unwrap();
            let t = eval_poly_sequence(PolyFamily::ChebyshevT, 20, c(w)).unwrap();
            for n in 1..=20 {
                let lhs = g[n].re / lambda;
                let rhs = 2.0 / n as f64 * t[n].re;
                assert!((lhs - rhs).abs() <= 1e-4 * rhs.abs().max(1e-2), "n={n} w={w}");
            }
        }
    }

    fn family() -> impl Strategy<Value = PolyFamily<f64>> {
        prop_oneof![
            (-0.45f64..5.0).prop_filter("nonzero", |l| l.abs() > 1e-3).prop_map(PolyFamily::Gegenbauer),
            Just(PolyFamily::Legendre),
            Just(PolyFamily::ChebyshevT),
            Just(PolyFamily::ChebyshevU),
            (-0.95f64..5.0).prop_map(PolyFamily::Laguerre),
            Just(PolyFamily::Hermite),
        ]
    }

    #[test]
    fn rescaled_hermite_sequences_match_plain_values() {
        let x = 1.3;
        let plain = eval_poly_sequence(PolyFamily::Hermite, 30, c(x)).unwrap();
        let scaled: Vec<f64> = ScaledHermite::<f64>::new(x).take(31).collect();
        let normal: Vec<f64> = NormalizedHermite::new(x).take(31).collect();
        let mut fact = 1.0f64;
        for n in 0..=30 {
            if n > 0 {
                fact *= n as f64;
            }
            let h = plain[n].re;
            assert!((scaled[n] - h / fact).abs() <= 1e-13 * (h / fact).abs().max(1e-300) + 1e-300);
            let norm = (2f64.powi(n as i32) * fact).sqrt();
            assert!((normal[n] - h / norm).abs() <= 1e-13 * (h / norm).abs().max(1e-12));
        }
    }

    proptest! {
        #[test]
        fn sequence_and_pointwise_agree_exactly(
            fam in family(),
            k in 0usize..=200,
            re in -1.5f64..1.5,
            im in -0.5f64..0.5,
        ) {
            let arg = Complex::new(re, im);
            let seq = eval_poly_sequence(fam, k, arg).unwrap();
            let point = eval_poly(fam, k, arg).unwrap();
            prop_assert_eq!(seq.len(), k + 1);
            let last = seq[k];
            prop_assert!(last.re.to_bits() == point.re.to_bits() || (last.re.is_nan() && point.re.is_nan()));
            prop_assert!(last.im.to_bits() == point.im.to_bits() || (last.im.is_nan() && point.im.is_nan()));
        }
    }
}
