//! A single series instance addressed uniformly by every evaluation route.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use rand::Rng;

use crate::closed::{
    chebyshev_t_sum_or_log, gegenbauer_sum, hermite_sum, laguerre_sum, mehler_sum_hermite_form, MehlerPoint,
};
use crate::contour::{derivative_series_by_contour_scaled, mehler_series_by_contour_scaled, ContourSpec, ContourValue};
use crate::error::{Error, Result};
use crate::oracle::{sum_series, EvalReport, PrecisionCtx, SeriesSpec};
use crate::poly::PolyFamily;
use crate::scalar::{complex_lit, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Gegenbauer,
    Legendre,
    ChebyshevT,
    ChebyshevU,
    Laguerre,
    Hermite,
    Mehler,
}

impl Family {
    pub const ALL: [Family; 7] = [
        Family::Gegenbauer,
        Family::Legendre,
        Family::ChebyshevT,
        Family::ChebyshevU,
        Family::Laguerre,
        Family::Hermite,
        Family::Mehler,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Gegenbauer => "gegenbauer",
            Family::Legendre => "legendre",
            Family::ChebyshevT => "chebyshev_t",
            Family::ChebyshevU => "chebyshev_u",
            Family::Laguerre => "laguerre",
            Family::Hermite => "hermite",
            Family::Mehler => "mehler",
        }
    }

    /// Smallest admissible `l`.
    pub fn min_l(self) -> usize {
        usize::from(self == Family::ChebyshevT)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.to_ascii_lowercase().replace('-', "_");
        Family::ALL
            .into_iter()
            .find(|f| f.name() == key)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown family '{s}'")))
    }
}

/// One series `Σ_{n>=l} binom(n, l) t^n c_n`.
///
/// `param` is λ for Gegenbauer and α for Laguerre. `arg` is `w`, `u` or `x`
/// depending on the family, and `y` is used by the Mehler series only.
/// For `ChebyshevT` the coefficients are `(2/n) T_n(w)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Case {
    pub family: Family,
    pub param: f64,
    pub l: usize,
    pub t: Complex<f64>,
    pub arg: f64,
    pub y: f64,
}

impl Case {
    fn poly_family<T: Real>(&self) -> Option<PolyFamily<T>> {
        let p = T::lit(self.param);
        Some(match self.family {
            Family::Gegenbauer => PolyFamily::Gegenbauer(p),
            Family::Legendre => PolyFamily::Legendre,
            Family::ChebyshevT => PolyFamily::ChebyshevT,
            Family::ChebyshevU => PolyFamily::ChebyshevU,
            Family::Laguerre => PolyFamily::Laguerre(p),
            Family::Hermite => PolyFamily::Hermite,
            Family::Mehler => return None,
        })
    }

    fn mehler_point<T: Real>(&self) -> Result<MehlerPoint<T>> {
        MehlerPoint::new(complex_lit(self.t), T::lit(self.arg), T::lit(self.y))
    }

    /// Closed form evaluated in the scalar type `T`.
    pub fn closed<T: Real>(&self) -> Result<Complex<T>> {
        let t = complex_lit::<T>(self.t);
        let (p, a, l) = (T::lit(self.param), T::lit(self.arg), self.l);
        match self.family {
            Family::Gegenbauer => gegenbauer_sum(p, l, t, a),
            Family::Legendre => gegenbauer_sum(T::lit(0.5), l, t, a),
            Family::ChebyshevU => gegenbauer_sum(T::one(), l, t, a),
            Family::ChebyshevT => chebyshev_t_sum_or_log(l, t, a),
            Family::Laguerre => laguerre_sum(p, l, t, a),
            Family::Hermite => hermite_sum(l, t, a),
            Family::Mehler => mehler_sum_hermite_form(l, &self.mehler_point()?),
        }
    }

    pub fn series_spec(&self) -> SeriesSpec<f64> {
        match self.family {
            Family::Mehler => SeriesSpec::mehler(self.l, self.t, self.arg, self.y),
            Family::ChebyshevT => SeriesSpec::chebyshev_t_weighted(self.l, self.t, self.arg),
            _ => SeriesSpec::poly(self.poly_family().expect("polynomial family"), self.l, self.t, self.arg),
        }
    }

    pub fn series(&self, ctx: &PrecisionCtx) -> Result<EvalReport<f64>> {
        sum_series(&self.series_spec(), ctx)
    }

    /// Contour value on the default circle for this point.
    pub fn contour(&self) -> Result<ContourValue<f64>> {
        self.contour_with(&ContourSpec::for_point(self.t.norm()))
    }

    pub fn contour_with(&self, c: &ContourSpec) -> Result<ContourValue<f64>> {
        self.contour_in(c)
    }

    /// Contour quadrature carried out in the scalar type `T`.
    pub fn contour_in<T: Real>(&self, c: &ContourSpec) -> Result<ContourValue<T>> {
        match self.poly_family() {
            Some(family) => {
                derivative_series_by_contour_scaled(family, self.l, complex_lit(self.t), T::lit(self.arg), c)
            }
            None => mehler_series_by_contour_scaled(self.l, &self.mehler_point()?, c),
        }
    }

    /// Draws a case from the standard verification domain.
    ///
    /// `t` (or `z`) lies in `|t| <= t_max`, real unless `complex` is set.
    pub fn random<R: Rng>(family: Family, l_max: usize, t_max: f64, complex: bool, rng: &mut R) -> Self {
        let l_lo = family.min_l();
        let l = rng.random_range(l_lo..=l_max.max(l_lo));
        let t = if complex {
            Complex::from_polar(
                t_max * rng.random::<f64>().sqrt(),
                rng.random_range(-std::f64::consts::PI..std::f64::consts::PI),
            )
        } else {
            Complex::new(rng.random_range(-t_max..=t_max), 0.0)
        };
        let param = match family {
            Family::Gegenbauer => loop {
                let v = 5.0 - rng.random_range(0.0..5.4);
                if v != 0.0 {
                    break v;
                }
            },
            Family::Laguerre => 5.0 - rng.random_range(0.0..5.9),
            _ => 0.0,
        };
        let arg = match family {
            Family::Laguerre => rng.random_range(0.0..=10.0),
            Family::Hermite | Family::Mehler => rng.random_range(-3.0..=3.0),
            _ => rng.random_range(-1.0..=1.0),
        };
        let y = if family == Family::Mehler { rng.random_range(-3.0..=3.0) } else { 0.0 };
        Case { family, param, l, t, arg, y }
    }
}
