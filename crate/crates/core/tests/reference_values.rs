#![allow(clippy::excessive_precision)]

use orthosum::case::{Case, Family};
use orthosum::closed::{chebyshev_t_sum, laguerre_sum, legendre_sum, MehlerPoint};
use orthosum::limits::{hermite_from_gegenbauer, hermite_from_laguerre};
use orthosum::oracle::PrecisionCtx;
use orthosum::scalar::complex_to_f64;
use orthosum::{Complex, Complex64, Extended};

fn c(re: f64) -> Complex64 {
    Complex::new(re, 0.0)
}

fn case(family: Family, param: f64, l: usize, t: f64, arg: f64, y: f64) -> Case {
    Case { family, param, l, t: c(t), arg, y }
}

/// Series values computed independently at 40 digits.
const REFERENCE: [(Family, f64, usize, f64, f64, f64, f64); 6] = [
    (Family::Legendre, 0.0, 2, 0.3, 0.5, 0.0, -0.054_352_507_952_122_449_5),
    (Family::Laguerre, -0.5, 3, 0.4, 2.3, 0.0, 0.173_768_781_793_903_478_7),
    (Family::Hermite, 0.0, 4, 0.6, -0.8, 0.0, -0.029_736_903_431_762_059_68),
    (Family::Mehler, 0.0, 2, 0.4, 1.0, -0.5, -0.093_212_010_551_748_540_83),
    (Family::ChebyshevT, 0.0, 4, 0.25, 0.9, 0.0, -0.003_705_852_118_746_163_137),
    (Family::ChebyshevU, 0.0, 2, 0.45, 0.7, 0.0, -0.348_039_289_568_838_809_0),
];

#[test]
fn every_route_reproduces_the_reference_values() {
    for (family, param, l, t, arg, y, expected) in REFERENCE {
        let k = case(family, param, l, t, arg, y);
        let closed = k.closed::<f64>().unwrap();
        let extended = complex_to_f64(k.closed::<Extended>().unwrap());
        let series = k.series(&PrecisionCtx::extended(1e-20)).unwrap().value;
        let contour = k.contour().unwrap().value;
        for (route, v, tol) in [
            ("closed", closed, 1e-13),
            ("extended", extended, 1e-15),
            ("series", series, 1e-15),
            ("contour", contour, 1e-12),
        ] {
            assert!((v - expected).norm() <= tol * expected.abs(), "{family} {route}: {v} vs {expected}");
        }
    }
}

#[test]
fn trivial_values() {
    assert_eq!(legendre_sum(0, c(0.5), 1.0).unwrap(), c(2.0));
    assert!((legendre_sum(3, c(0.5), 1.0).unwrap() - 2.0).norm() < 1e-14);
    assert!((chebyshev_t_sum(1, c(0.5), 1.0).unwrap() - 2.0).norm() < 1e-14);
    assert!((laguerre_sum(0.0, 1, c(0.5), 0.0).unwrap() - 2.0).norm() < 1e-14);
    let p = MehlerPoint::new(c(0.0), 0.7, -1.3).unwrap();
    assert_eq!(orthosum::closed::mehler_sum_laguerre_form(1, &p).unwrap(), c(0.0));
}

#[test]
fn limits_approach_the_hermite_sum() {
    let exact = orthosum::genfn::gen_hermite(c(0.5), 0.3).unwrap();
    assert!((hermite_from_gegenbauer(1e6, 0, c(0.5), 0.3).unwrap() - exact).norm() < 1e-3 * exact.norm());
    assert!((hermite_from_laguerre(1e6, 0, c(0.5), 0.3).unwrap() - exact).norm() < 1e-3 * exact.norm());
    assert_eq!(hermite_from_gegenbauer(1e4, 0, c(0.0), 2.0).unwrap(), c(1.0));
    assert_eq!(hermite_from_laguerre(1e4, 3, c(0.0), 1.0).unwrap(), c(0.0));
}

#[test]
fn single_precision_tracks_double() {
    for (family, param, l, t, arg, y, expected) in REFERENCE {
        let v = case(family, param, l, t, arg, y).closed::<f32>().unwrap();
        assert!((f64::from(v.re) - expected).abs() < 1e-4 * expected.abs(), "{family}: {v}");
    }
}
