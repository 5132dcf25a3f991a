//! Closed-form sums `Σ_{n>=l} binom(n, l) t^n p_n` for every family and for
//! the bilinear Hermite (Mehler) series.

use num_complex::Complex;
use num_traits::pow;

use crate::error::{Error, Result};
use crate::genfn::{
    check_disk, check_real, gen_chebyshev_log, gen_gegenbauer, gen_hermite, gen_laguerre, gen_mehler, hermite_kernel,
    laguerre_kernel, mehler_parts, q_transform,
};
use crate::poly::{eval_poly, PolyFamily, Recurrence, ScaledHermite, DEFAULT_DEGREE_CAP};
use crate::scalar::{is_finite, Real};

/// Largest `l` accepted by [`mehler_sum_hermite_form`]; its binomials are exact in `u64`.
pub const MEHLER_HERMITE_FORM_CAP: usize = 64;

/// Below this modulus of `1 - z^2` the Mehler sums are flagged as ill-conditioned.
pub const MEHLER_ILL_CONDITIONED: f64 = 1e-8;

/// A point `(z, x, y)` of the Mehler series with `|z| < 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MehlerPoint<T> {
    pub z: Complex<T>,
    pub x: T,
    pub y: T,
}

impl<T: Real> MehlerPoint<T> {
    pub fn new(z: Complex<T>, x: T, y: T) -> Result<Self> {
        let p = Self { z, x, y };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        check_disk(self.z, "z")?;
        check_real(self.x, "x")?;
        check_real(self.y, "y")
    }

    pub fn swapped(&self) -> Self {
        Self { z: self.z, x: self.y, y: self.x }
    }
}

/// `q^(-2λ) (t/q)^l C_l^λ((w - t)/q)`.
pub fn gegenbauer_sum<T: Real>(lambda: T, l: usize, t: Complex<T>, w: T) -> Result<Complex<T>> {
    if l == 0 {
        return gen_gegenbauer(lambda, t, w);
    }
    let family = PolyFamily::Gegenbauer(lambda);
    family.validate()?;
    let qt = q_transform(t, w)?;
    let base = (qt.log_q * (-(lambda + lambda))).exp();
    Ok(base * pow(t * qt.xi_scale, l) * eval_poly(family, l, qt.eta)?)
}

pub fn legendre_sum<T: Real>(l: usize, t: Complex<T>, w: T) -> Result<Complex<T>> {
    gegenbauer_sum(T::lit(0.5), l, t, w)
}

pub fn chebyshev_u_sum<T: Real>(l: usize, t: Complex<T>, w: T) -> Result<Complex<T>> {
    gegenbauer_sum(T::one(), l, t, w)
}

/// `Σ_{n>=l} binom(n, l) t^n (2/n) T_n(w) = (t/q)^l (2/l) T_l((w - t)/q)` for `l >= 1`.
///
/// The `l = 0` series is [`gen_chebyshev_log`].
pub fn chebyshev_t_sum<T: Real>(l: usize, t: Complex<T>, w: T) -> Result<Complex<T>> {
    if l == 0 {
        return Err(Error::InvalidParameter(
            "chebyshev_t_sum needs l >= 1; the l = 0 series is the logarithmic generating function".into(),
        ));
    }
    let qt = q_transform(t, w)?;
    let tl = eval_poly(PolyFamily::ChebyshevT, l, qt.eta)?;
    Ok(pow(t * qt.xi_scale, l) * tl * (T::lit(2.0) / T::of_usize(l)))
}

/// `(1-t)^(-α-1) exp(-ut/(1-t)) (t/(1-t))^l L_l^α(u/(1-t))`.
pub fn laguerre_sum<T: Real>(alpha: T, l: usize, t: Complex<T>, u: T) -> Result<Complex<T>> {
    if l == 0 {
        return gen_laguerre(alpha, t, u);
    }
    let family = PolyFamily::Laguerre(alpha);
    family.validate()?;
    check_disk(t, "t")?;
    check_real(u, "u")?;
    let inv = (Complex::from(T::one()) - t).inv();
    let base = laguerre_kernel(alpha, t, Complex::from(u));
    Ok(base * pow(t * inv, l) * eval_poly(family, l, inv * u)?)
}

/// `exp(2xz - z^2) (z^l / l!) H_l(x - z)`.
pub fn hermite_sum<T: Real>(l: usize, z: Complex<T>, x: T) -> Result<Complex<T>> {
    if l == 0 {
        return gen_hermite(z, x);
    }
    if !is_finite(z) {
        return Err(Error::Domain("z must be finite".into()));
    }
    check_real(x, "x")?;
    if l > DEFAULT_DEGREE_CAP {
        return Err(Error::DegreeCapExceeded { degree: l, cap: DEFAULT_DEGREE_CAP });
    }
    let xc = Complex::from(x);
    let scaled = ScaledHermite::<T, Complex<T>>::new(xc - z).nth(l).expect("infinite sequence");
    Ok(hermite_kernel(z, xc) * pow(z, l) * scaled)
}

struct MehlerSetup<T> {
    one_minus_z: Complex<T>,
    one_plus_z: Complex<T>,
    /// `(z / (1 - z))^l M_0`
    prefactor: Complex<T>,
    /// `-(1 - z) / (1 + z)`
    ratio: Complex<T>,
}

fn mehler_setup<T: Real>(l: usize, p: &MehlerPoint<T>) -> Result<MehlerSetup<T>> {
    p.validate()?;
    let one = Complex::from(T::one());
    let one_minus_z = one - p.z;
    let one_plus_z = one + p.z;
    let det = one_minus_z * one_plus_z;
    if det.norm() < T::lit(MEHLER_ILL_CONDITIONED) {
        return Err(Error::IllConditioned(format!("|1 - z^2| = {:e} is below {MEHLER_ILL_CONDITIONED:e}", det.norm())));
    }
    let m0 = mehler_parts(p.z, one_minus_z, p.x, p.y).value();
    Ok(MehlerSetup {
        one_minus_z,
        one_plus_z,
        prefactor: m0 * pow(p.z / one_minus_z, l),
        ratio: -one_minus_z / one_plus_z,
    })
}

/// Generalized Mehler sum `Σ_{n>=l} binom(n, l) z^n H_n(x) H_n(y) / (n! 2^n)`
/// as a finite sum of products of Laguerre polynomials of order `-1/2`.
pub fn mehler_sum_laguerre_form<T: Real>(l: usize, p: &MehlerPoint<T>) -> Result<Complex<T>> {
    if l == 0 {
        return gen_mehler(p.z, p.x, p.y);
    }
    let s = mehler_setup(l, p)?;
    let half = T::lit(0.5);
    let d = p.x - p.y;
    let e = p.x + p.y;
    let a = (s.one_minus_z * T::lit(2.0)).inv() * (d * d);
    let b = (s.one_plus_z * T::lit(2.0)).inv() * (e * e);
    let family = PolyFamily::Laguerre(-half);
    let la: Vec<_> = Recurrence::new(family, a).take(l + 1).collect();
    let lb: Vec<_> = Recurrence::new(family, b).take(l + 1).collect();
    let mut sum = Complex::from(T::zero());
    let mut rho = Complex::from(T::one());
    for m in 0..=l {
        sum += rho * la[l - m] * lb[m];
        rho *= s.ratio;
    }
    Ok(s.prefactor * sum)
}

/// Exact `binom(l, m)` for `m = 0..=l`, `l <= 64`.
fn binomial_row(l: usize) -> Vec<u64> {
    let mut row = vec![1u64; l + 1];
    for m in 1..l {
        // binom(l, m) = binom(l, m-1) (l - m + 1) / m, exact in u128
        row[m] = (row[m - 1] as u128 * (l - m + 1) as u128 / m as u128) as u64;
    }
    row
}

/// The Mehler sum in terms of even Hermite polynomials.
pub fn mehler_sum_hermite_form<T: Real>(l: usize, p: &MehlerPoint<T>) -> Result<Complex<T>> {
    if l == 0 {
        return gen_mehler(p.z, p.x, p.y);
    }
    if l > MEHLER_HERMITE_FORM_CAP {
        return Err(Error::DegreeCapExceeded { degree: l, cap: MEHLER_HERMITE_FORM_CAP });
    }
    let s = mehler_setup(l, p)?;
    let two = T::lit(2.0);
    let a = (s.one_minus_z * two).sqrt().inv() * (p.x - p.y);
    let b = (s.one_plus_z * two).sqrt().inv() * (p.x + p.y);
    let ha: Vec<_> = Recurrence::new(PolyFamily::Hermite, a).take(2 * l + 1).collect();
    let hb: Vec<_> = Recurrence::new(PolyFamily::Hermite, b).take(2 * l + 1).collect();
    let binom = binomial_row(l);
    let mut sum = Complex::from(T::zero());
    let mut rho = Complex::from(T::one());
    for m in 0..=l {
        sum += rho * ha[2 * (l - m)] * hb[2 * m] * T::from_u64(binom[m]).expect("finite binomial");
        rho *= s.ratio;
    }
    // (-1)^l / (l! 4^l), accumulated to stay finite in narrow types
    let scale = (1..=l).fold(T::one(), |acc, k| acc / T::of_usize(4 * k));
    let sign = if l % 2 == 0 { T::one() } else { -T::one() };
    Ok(s.prefactor * sum * (scale * sign))
}

/// Diagnostic route: the Leibniz expansion of the `l`-th derivative of the
/// factored kernel, `Σ_m S_{l-m}(z, (x-y)^2/2) S_m(-z, (x+y)^2/2)` with
/// `S` the order `-1/2` Laguerre sums.
pub fn mehler_sum_leibniz<T: Real>(l: usize, p: &MehlerPoint<T>) -> Result<Complex<T>> {
    p.validate()?;
    let half = T::lit(0.5);
    let alpha = -half;
    let d = p.x - p.y;
    let e = p.x + p.y;
    let mut sum = Complex::from(T::zero());
    for m in 0..=l {
        let left = laguerre_sum(alpha, l - m, p.z, d * d * half)?;
        let right = laguerre_sum(alpha, m, -p.z, e * e * half)?;
        sum += left * right;
    }
    Ok(sum)
}

/// The `l = 0` Chebyshev-T object, provided so every family has an `l`-indexed entry point.
pub fn chebyshev_t_sum_or_log<T: Real>(l: usize, t: Complex<T>, w: T) -> Result<Complex<T>> {
    if l == 0 {
        gen_chebyshev_log(t, w)
    } else {
        chebyshev_t_sum(l, t, w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{sum_series, PrecisionCtx, SeriesSpec};
    use crate::scalar::{complex_lit, complex_to_f64};
    use crate::Extended;
    use num_traits::{Float, One, Zero};
    use proptest::prelude::*;

    type C = Complex<f64>;

    fn c(re: f64) -> C {
        Complex::new(re, 0.0)
    }

    fn rel(a: C, b: C) -> f64 {
        (a - b).norm() / b.norm()
    }

    fn ext_ctx() -> PrecisionCtx {
        PrecisionCtx::extended(1e-25)
    }

    #[test]
    fn trivial_values() {
        assert_eq!(gegenbauer_sum(0.5, 0, c(0.4), 0.6).unwrap(), gen_gegenbauer(0.5, c(0.4), 0.6).unwrap());
        assert!((gegenbauer_sum(1.0, 0, c(0.5), 1.0).unwrap() - c(4.0)).norm() < 1e-15);
        assert!((legendre_sum(3, c(0.5), 1.0).unwrap() - c(2.0)).norm() < 1e-14);
        assert!((chebyshev_t_sum(1, c(0.5), 1.0).unwrap() - c(2.0)).norm() < 1e-15);
        assert!((chebyshev_u_sum(0, c(0.5), 1.0).unwrap() - c(4.0)).norm() < 1e-15);
        assert!((laguerre_sum(0.0, 1, c(0.5), 0.0).unwrap() - c(2.0)).norm() < 1e-15);
        assert_eq!(hermite_sum(1, c(0.9), 0.9).unwrap(), c(0.0));
        assert_eq!(hermite_sum(0, c(0.7), 1.1).unwrap(), gen_hermite(c(0.7), 1.1).unwrap());
        let p = MehlerPoint::new(c(0.0), 0.4, -1.3).unwrap();
        assert_eq!(mehler_sum_laguerre_form(1, &p).unwrap(), c(0.0));
        let p = MehlerPoint::new(Complex::new(0.3, 0.2), 0.4, -1.3).unwrap();
        let g = gen_mehler(p.z, p.x, p.y).unwrap();
        assert_eq!(mehler_sum_laguerre_form(0, &p).unwrap(), g);
        assert_eq!(mehler_sum_hermite_form(0, &p).unwrap(), g);
        // q = 1 - t at w = 1, and the log series
        let t = c(0.3);
        let q = gegenbauer_sum(0.5, 0, t, 1.0).unwrap();
        assert!((q - c(1.0 / 0.7)).norm() < 1e-15);
        assert_eq!(chebyshev_t_sum_or_log(0, t, 0.2).unwrap(), gen_chebyshev_log(t, 0.2).unwrap());
    }

    #[test]
    fn reference_values() {
        // 40-digit direct summations
        let cases: [(C, f64); 11] = [
            (gegenbauer_sum(0.5, 2, c(0.3), 0.5).unwrap(), -0.054352507952122444),
            (legendre_sum(2, c(0.35), -0.2).unwrap(), -0.012141042492819583),
            (chebyshev_t_sum(4, c(0.25), 0.9).unwrap(), -0.003_705_852_118_746_162),
            (chebyshev_t_sum(1, c(0.3), 0.2).unwrap(), -0.061855670103092768),
            (chebyshev_t_sum(3, c(0.25), -0.4).unwrap(), 0.007_057_484_495_631_212),
            (chebyshev_u_sum(1, c(0.2), 0.0).unwrap(), -0.073_964_497_041_420_12),
            (chebyshev_u_sum(2, c(0.45), 0.7).unwrap(), -0.348_039_289_568_838_9),
            (laguerre_sum(-0.5, 3, c(0.4), 2.3).unwrap(), 0.173_768_781_793_903_5),
            (hermite_sum(4, c(0.6), -0.8).unwrap(), -0.029736903431762054),
            (
                mehler_sum_laguerre_form(2, &MehlerPoint::new(c(0.4), 1.0, -0.5).unwrap()).unwrap(),
                -0.093_212_010_551_748_55,
            ),
            (mehler_sum_hermite_form(4, &MehlerPoint::new(c(-0.3), 0.9, 0.9).unwrap()).unwrap(), 0.014052493972704294),
        ];
        for (i, (got, want)) in cases.iter().enumerate() {
            assert!(rel(*got, c(*want)) < 1e-12, "case {i}: {got} vs {want}");
        }
    }

    #[test]
    fn first_order_chebyshev_rearrangement() {
        // Σ_{n>=1} t^n 2 T_n(w) = 2[(1 - wt)/(1 - 2wt + t^2) - 1]
        let (t, w) = (0.3, 0.2);
        let rational = 2.0 * ((1.0 - w * t) / (1.0 - 2.0 * w * t + t * t) - 1.0);
        assert!(rel(chebyshev_t_sum(1, c(t), w).unwrap(), c(rational)) < 1e-14);
    }

    #[test]
    fn parameter_and_domain_errors() {
        assert!(matches!(chebyshev_t_sum(0, c(0.3), 0.2), Err(Error::InvalidParameter(_))));
        assert!(matches!(gegenbauer_sum(0.0, 2, c(0.3), 0.2), Err(Error::InvalidParameter(_))));
        assert!(matches!(gegenbauer_sum(-0.6, 0, c(0.3), 0.2), Err(Error::InvalidParameter(_))));
        assert!(matches!(laguerre_sum(-1.0, 2, c(0.3), 0.2), Err(Error::InvalidParameter(_))));
        assert!(matches!(gegenbauer_sum(1.5, 2, c(1.0), 0.2), Err(Error::Domain(_))));
        assert!(matches!(laguerre_sum(0.5, 2, c(-1.2), 0.2), Err(Error::Domain(_))));
        assert!(matches!(hermite_sum(2, Complex::new(f64::NAN, 0.0), 0.2), Err(Error::Domain(_))));
        assert!(matches!(MehlerPoint::new(c(1.0), 0.0, 0.0), Err(Error::Domain(_))));
        let near = MehlerPoint { z: c(1.0 - 1e-9), x: 0.1, y: 0.2 };
        assert!(matches!(mehler_sum_laguerre_form(2, &near), Err(Error::IllConditioned(_))));
        let p = MehlerPoint::new(c(0.5), 0.1, 0.2).unwrap();
        assert!(matches!(mehler_sum_hermite_form(65, &p), Err(Error::DegreeCapExceeded { degree: 65, cap: 64 })));
        assert!(gegenbauer_sum(1.0, 3, c(0.5), 1.0).is_ok());
        // t on the circle through e^{iθ}
        let t = Complex::from_polar(1.0 - 1e-9, 0.4);
        assert!(matches!(gegenbauer_sum(1.0, 3, t, 0.4f64.cos()), Err(Error::IllConditioned(_))));
    }

    #[test]
    fn binomial_row_is_exact() {
        let row = binomial_row(64);
        assert_eq!(row[32], 1_832_624_140_942_590_534);
        assert_eq!(row.iter().map(|&b| b as u128).sum::<u128>(), 1u128 << 64);
        assert_eq!(binomial_row(1), vec![1, 1]);
    }

    #[test]
    fn extended_precision_agrees_with_double() {
        let t = Complex::new(0.55, -0.3);
        let lo = gegenbauer_sum(2.5, 6, t, -0.35).unwrap();
        let hi =
            gegenbauer_sum(Extended::from_f64(2.5), 6, complex_lit::<Extended>(t), Extended::from_f64(-0.35)).unwrap();
        assert!(rel(lo, complex_to_f64(hi)) < 1e-14);
        let p = MehlerPoint::new(t, 1.5, -2.0).unwrap();
        let pe =
            MehlerPoint::new(complex_lit::<Extended>(t), Extended::from_f64(1.5), Extended::from_f64(-2.0)).unwrap();
        let lo = mehler_sum_hermite_form(5, &p).unwrap();
        let hi = mehler_sum_hermite_form(5, &pe).unwrap();
        assert!(rel(lo, complex_to_f64(hi)) < 1e-13);
    }

    #[test]
    fn single_precision_is_usable() {
        let v = legendre_sum(2, Complex::new(0.35f32, 0.0), -0.2f32).unwrap();
        assert!((v.re as f64 + 0.012141042492819583).abs() < 1e-6);
    }

    fn disk(max: f64) -> impl Strategy<Value = C> {
        (0.0..max, -3.2f64..3.2).prop_map(|(r, p)| Complex::from_polar(r, p))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn gegenbauer_matches_series(
            lambda in prop_oneof![-0.4f64..-0.01, 0.01f64..5.0],
            l in 0usize..=8, t in disk(0.85), w in -1.0f64..=1.0,
        ) {
            let closed = gegenbauer_sum(lambda, l, t, w).unwrap();
            let spec = SeriesSpec::poly(PolyFamily::Gegenbauer(lambda), l, t, w);
            let r = sum_series(&spec, &ext_ctx()).unwrap();
            prop_assert!((closed - r.value).norm() <= 10.0 * (r.est_abs_error + 1e-12 * r.value.norm()));
        }

        #[test]
        fn laguerre_matches_series(
            alpha in -0.9f64..5.0, l in 0usize..=8, t in disk(0.85), u in 0.0f64..10.0,
        ) {
            let closed = laguerre_sum(alpha, l, t, u).unwrap();
            let spec = SeriesSpec::poly(PolyFamily::Laguerre(alpha), l, t, u);
            let r = sum_series(&spec, &ext_ctx()).unwrap();
            prop_assert!((closed - r.value).norm() <= 10.0 * (r.est_abs_error + 1e-12 * r.value.norm()));
        }

        #[test]
        fn hermite_matches_series(l in 0usize..=8, z in disk(2.0), x in -3.0f64..3.0) {
            let closed = hermite_sum(l, z, x).unwrap();
            let r = sum_series(&SeriesSpec::poly(PolyFamily::Hermite, l, z, x), &ext_ctx()).unwrap();
            prop_assert!((closed - r.value).norm() <= 10.0 * (r.est_abs_error + 1e-12 * r.value.norm()));
        }

        #[test]
        fn chebyshev_matches_series(l in 1usize..=6, t in disk(0.85), w in -1.0f64..=1.0) {
            let closed = chebyshev_t_sum(l, t, w).unwrap();
            let r = sum_series(&SeriesSpec::chebyshev_t_weighted(l, t, w), &ext_ctx()).unwrap();
            prop_assert!((closed - r.value).norm() <= 10.0 * (r.est_abs_error + 1e-12 * r.value.norm()));
        }

        #[test]
        fn mehler_routes_agree(l in 0usize..=6, z in disk(0.8), x in -3.0f64..3.0, y in -3.0f64..3.0) {
            let p = MehlerPoint::new(z, x, y).unwrap();
            let lag = mehler_sum_laguerre_form(l, &p).unwrap();
            let her = mehler_sum_hermite_form(l, &p).unwrap();
            let leib = mehler_sum_leibniz(l, &p).unwrap();
            let scale = lag.norm().max(1e-300);
            prop_assert!((lag - her).norm() <= 1e-12 * scale);
            prop_assert!((lag - leib).norm() <= 1e-11 * scale);
            let sym = mehler_sum_laguerre_form(l, &p.swapped()).unwrap();
            prop_assert!((lag - sym).norm() <= 1e-13 * scale);
            let r = sum_series(&SeriesSpec::mehler(l, z, x, y), &ext_ctx()).unwrap();
            prop_assert!((lag - r.value).norm() <= 10.0 * (r.est_abs_error + 1e-12 * r.value.norm()));
        }

        #[test]
        fn shifted_series_reproduces_the_power_bookkeeping(
            lambda in 0.1f64..4.0, l in 1usize..=6, t in -0.8f64..0.8, w in -1.0f64..=1.0,
        ) {
            // t^l Σ_m binom(l+m, l) t^m C_{l+m}^λ(w), summed in extended precision
            let e = Extended::from_f64;
            let family = PolyFamily::Gegenbauer(e(lambda));
            let mut shifted = Extended::zero();
            let mut weight = Extended::one();
            for (m, cn) in Recurrence::new(family, e(w)).skip(l).take(600).enumerate() {
                shifted += weight * cn;
                weight = weight * e(t) * Extended::of_usize(l + m + 1) / Extended::of_usize(m + 1);
            }
            let shifted = (shifted * e(t).powi(l as i32)).to_f64();
            let closed = gegenbauer_sum(lambda, l, c(t), w).unwrap();
            prop_assert!((closed - c(shifted)).norm() <= 1e-12 * closed.norm().max(1e-300) + 1e-300);
        }
    }
}
