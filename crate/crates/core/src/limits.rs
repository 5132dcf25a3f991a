//! Recovery of the Hermite sums as limits of the Gegenbauer and Laguerre sums
//! under the scalings `C_n^λ(x/√λ) λ^(-n/2) → H_n(x)/n!` and
//! `(2/α)^(n/2) L_n^α(α - √(2α) x) → H_n(x)/n!`.

use num_complex::Complex;

use crate::closed::{gegenbauer_sum, laguerre_sum};
use crate::error::{Error, Result};
use crate::genfn::check_real;
use crate::scalar::{is_finite, Real};

fn check_scaled<T: Real>(t: Complex<T>, z: Complex<T>) -> Result<()> {
    if !is_finite(z) {
        return Err(Error::Domain("z must be finite".into()));
    }
    if t.norm() >= T::one() {
        return Err(Error::Domain(format!(
            "scaled |z| = {:e} must be below 1; increase the order parameter",
            t.norm()
        )));
    }
    Ok(())
}

/// The Gegenbauer sum at `t = z/√λ`, `w = x/√λ`.
pub fn hermite_from_gegenbauer<T: Real>(lambda: T, l: usize, z: Complex<T>, x: T) -> Result<Complex<T>> {
    check_real(x, "x")?;
    if !(lambda > T::zero()) {
        return Err(Error::InvalidParameter(format!("λ must be positive, got {lambda:e}")));
    }
    let s = lambda.sqrt().recip();
    let t = z * s;
    check_scaled(t, z)?;
    let w = x * s;
    if w.abs() > T::one() {
        return Err(Error::Domain(format!("scaled |x| = {:e} exceeds 1; increase λ", w.abs())));
    }
    gegenbauer_sum(lambda, l, t, w)
}

/// The Laguerre sum at `t = √(2/α) z`, `u = α (1 - √(2/α) x)`.
pub fn hermite_from_laguerre<T: Real>(alpha: T, l: usize, z: Complex<T>, x: T) -> Result<Complex<T>> {
    check_real(x, "x")?;
    if !(alpha > T::zero()) {
        return Err(Error::InvalidParameter(format!("α must be positive, got {alpha:e}")));
    }
    let s = (T::lit(2.0) / alpha).sqrt();
    let t = z * s;
    check_scaled(t, z)?;
    laguerre_sum(alpha, l, t, alpha * (T::one() - s * x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed::hermite_sum;
    use crate::genfn::gen_hermite;

    type C = Complex<f64>;

    fn c(re: f64) -> C {
        Complex::new(re, 0.0)
    }

    #[test]
    fn large_parameters_approach_the_hermite_generating_function() {
        let g = gen_hermite(c(0.5), 0.3).unwrap();
        assert!((hermite_from_gegenbauer(1e6, 0, c(0.5), 0.3).unwrap() - g).norm() < 1e-3);
        assert!((hermite_from_laguerre(1e6, 0, c(0.5), 0.3).unwrap() - g).norm() < 1e-3);
    }

    #[test]
    fn zero_point_values() {
        assert!((hermite_from_gegenbauer(1e4, 0, c(0.0), 2.7).unwrap() - c(1.0)).norm() < 1e-15);
        assert_eq!(hermite_from_laguerre(1e4, 3, c(0.0), 1.0).unwrap(), c(0.0));
    }

    #[test]
    fn errors_shrink_with_the_order_parameter() {
        let sweep = |f: &dyn Fn(f64) -> C, target: C, params: &[f64]| -> Vec<f64> {
            params.iter().map(|&p| (f(p) - target).norm()).collect()
        };
        let target = hermite_sum(2, c(0.4), 1.0).unwrap();
        let errs = sweep(&|p| hermite_from_gegenbauer(p, 2, c(0.4), 1.0).unwrap(), target, &[1e2, 1e3, 1e4]);
        assert!(errs.windows(2).all(|w| w[1] < w[0]), "{errs:?}");
        let target = hermite_sum(1, c(0.3), -0.7).unwrap();
        let errs = sweep(&|p| hermite_from_laguerre(p, 1, c(0.3), -0.7).unwrap(), target, &[1e2, 1e3, 1e4, 1e5]);
        assert!(errs.windows(2).all(|w| w[1] < w[0]), "{errs:?}");
    }

    #[test]
    fn small_parameters_are_rejected() {
        assert!(matches!(hermite_from_gegenbauer(1.0, 0, c(1.5), 0.0), Err(Error::Domain(_))));
        assert!(matches!(hermite_from_gegenbauer(4.0, 0, c(0.1), 3.0), Err(Error::Domain(_))));
        assert!(matches!(hermite_from_laguerre(2.0, 0, c(1.0), 0.0), Err(Error::Domain(_))));
        assert!(matches!(hermite_from_laguerre(-2.0, 0, c(0.1), 0.0), Err(Error::InvalidParameter(_))));
    }
}
