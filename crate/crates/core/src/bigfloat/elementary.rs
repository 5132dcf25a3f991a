//! Elementary functions for [`BigFloat`].
//!
//! Each function starts from an `f64` estimate and either refines it by
//! Newton/Halley steps or evaluates a Taylor series after argument
//! reduction. Accuracy is within a few hundred ulps of the full mantissa
//! (about 70 correct decimal digits for `N = 4`) for moderate arguments;
//! trigonometric reduction loses bits proportional to `log2|x|`.

use std::cell::RefCell;
use std::collections::HashMap;

use super::{BigFloat, Kind};

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum Constant {
    Ln2,
    Pi,
}

thread_local! {
    static CONSTANTS: RefCell<HashMap<(usize, Constant), Vec<u64>>> = RefCell::new(HashMap::new());
}

impl<const N: usize> BigFloat<N> {
    fn cached(which: Constant, compute: fn() -> Self) -> Self {
        let key = (N, which);
        if let Some(v) = CONSTANTS.with(|c| c.borrow().get(&key).cloned()) {
            return Self::from_cache(&v);
        }
        let value = compute();
        CONSTANTS.with(|c| c.borrow_mut().insert(key, value.to_cache()));
        value
    }

    fn to_cache(self) -> Vec<u64> {
        let mut v = self.mant.to_vec();
        v.push(self.exp as u64);
        v
    }

    fn from_cache(v: &[u64]) -> Self {
        let mut mant = [0u64; N];
        mant.copy_from_slice(&v[..N]);
        Self { kind: Kind::Normal, neg: false, exp: v[N] as i64, mant }
    }

    /// Below this relative size a series term no longer affects the sum.
    fn negligible(term: Self, sum: Self) -> bool {
        term.kind == Kind::Zero || (sum.kind == Kind::Normal && term.exp < sum.exp - Self::BITS as i64 - 4)
    }

    /// `sum_{k>=0} (-1)^k / ((2k+1) x^(2k+1))`, i.e. `atan(1/x)` for integer x > 1.
    fn atan_inv(x: u64) -> Self {
        let x2 = x * x;
        let mut power = Self::ONE.div_u64(x);
        let mut sum = power;
        let mut k = 1u64;
        loop {
            power = power.div_u64(x2);
            let term = power.div_u64(2 * k + 1);
            if Self::negligible(term, sum) {
                return sum;
            }
            sum = if k % 2 == 1 { sum - term } else { sum + term };
            k += 1;
        }
    }

    pub fn ln2() -> Self {
        Self::cached(Constant::Ln2, || {
            // 2·atanh(1/3)
            let mut power = Self::ONE.div_u64(3);
            let mut sum = power;
            let mut k = 1u64;
            loop {
                power = power.div_u64(9);
                let term = power.div_u64(2 * k + 1);
                if Self::negligible(term, sum) {
                    return sum.ldexp(1);
                }
                sum += term;
                k += 1;
            }
        })
    }

    pub fn pi() -> Self {
        Self::cached(Constant::Pi, || {
            // Machin: pi = 16 atan(1/5) - 4 atan(1/239)
            Self::atan_inv(5).ldexp(4) - Self::atan_inv(239).ldexp(2)
        })
    }

    pub(crate) fn exp_impl(self) -> Self {
        match self.kind {
            Kind::Nan => return Self::NAN,
            Kind::Zero => return Self::ONE,
            Kind::Inf => return if self.neg { Self::ZERO } else { self },
            Kind::Normal => {}
        }
        let approx = self.to_f64();
        if approx > 7.0e11 {
            return Self::INFINITY;
        }
        if approx < -7.0e11 {
            return Self::ZERO;
        }
        let k = (approx / std::f64::consts::LN_2).round();
        let r = self - Self::ln2() * Self::from_f64(k);
        // halve the argument 8 times, sum the Taylor series, square back
        const HALVINGS: i64 = 8;
        let r = r.ldexp(-HALVINGS);
        let mut sum = Self::ONE;
        let mut term = Self::ONE;
        let mut j = 1u64;
        loop {
            term = (term * r).div_u64(j);
            if Self::negligible(term, sum) {
                break;
            }
            sum += term;
            j += 1;
        }
        for _ in 0..HALVINGS {
            sum = sum * sum;
        }
        sum.ldexp(k as i64)
    }

    /// `exp(x) - 1` without cancellation for small `|x|`.
    pub(crate) fn exp_m1_impl(self) -> Self {
        if self.kind != Kind::Normal || self.exp > -1 {
            return self.exp_impl() - Self::ONE;
        }
        let mut sum = self;
        let mut term = self;
        let mut j = 2u64;
        loop {
            term = (term * self).div_u64(j);
            if Self::negligible(term, sum) {
                return sum;
            }
            sum += term;
            j += 1;
        }
    }

    pub(crate) fn ln_impl(self) -> Self {
        match self.kind {
            Kind::Nan => return Self::NAN,
            Kind::Zero => return -Self::INFINITY,
            _ if self.neg => return Self::NAN,
            Kind::Inf => return self,
            Kind::Normal => {}
        }
        let (mut m, mut e) = self.frexp();
        if m < Self::from_f64(std::f64::consts::FRAC_1_SQRT_2) {
            m = m.ldexp(1);
            e -= 1;
        }
        // Halley iteration on exp(y) = m; triples the correct bits per step
        let mut y = Self::from_f64(m.to_f64().ln());
        for _ in 0..Self::newton_steps(3) {
            let ey = y.exp_impl();
            y += ((m - ey) / (m + ey)).ldexp(1);
        }
        y + Self::ln2() * Self::from_i64(e)
    }

    pub(crate) fn ln_1p_impl(self) -> Self {
        if self.kind != Kind::Normal || self.exp > -20 {
            return (Self::ONE + self).ln_impl();
        }
        // x - x^2/2 + x^3/3 - ...
        let mut sum = self;
        let mut power = self;
        let mut j = 2u64;
        loop {
            power = -(power * self);
            let term = power.div_u64(j);
            if Self::negligible(term, sum) {
                return sum;
            }
            sum += term;
            j += 1;
        }
    }

    /// `(sin r, cos r)` by Taylor series for `|r| <= pi/4`.
    fn sin_cos_reduced(r: Self) -> (Self, Self) {
        let r2 = r * r;
        let mut sin = r;
        let mut cos = Self::ONE;
        let mut st = r;
        let mut ct = Self::ONE;
        let mut j = 1u64;
        loop {
            // st: r^(2j+1)/(2j+1)!, ct: r^(2j)/(2j)!
            ct = -(ct * r2).div_u64((2 * j - 1) * (2 * j));
            st = -(st * r2).div_u64((2 * j) * (2 * j + 1));
            let done = Self::negligible(ct, cos) && Self::negligible(st, sin);
            cos += ct;
            sin += st;
            if done {
                return (sin, cos);
            }
            j += 1;
        }
    }

    pub(crate) fn sin_cos_impl(self) -> (Self, Self) {
        match self.kind {
            Kind::Nan | Kind::Inf => return (Self::NAN, Self::NAN),
            Kind::Zero => return (self, Self::ONE),
            Kind::Normal => {}
        }
        let half_pi = Self::pi().ldexp(-1);
        let k = (self.to_f64() / std::f64::consts::FRAC_PI_2).round();
        let r = self - half_pi * Self::from_f64(k);
        let (s, c) = Self::sin_cos_reduced(r);
        match (k.rem_euclid(4.0)) as u8 {
            0 => (s, c),
            1 => (c, -s),
            2 => (-s, -c),
            _ => (-c, s),
        }
    }

    pub(crate) fn atan2_impl(self, x: Self) -> Self {
        let y = self;
        use Kind::*;
        match (y.kind, x.kind) {
            (Nan, _) | (_, Nan) => return Self::NAN,
            (Zero, _) => {
                return if x.neg {
                    if y.neg {
                        -Self::pi()
                    } else {
                        Self::pi()
                    }
                } else {
                    y
                }
            }
            (Inf, Inf) => {
                let q = if x.neg { Self::pi().ldexp(-2) * Self::from_u64(3) } else { Self::pi().ldexp(-2) };
                return if y.neg { -q } else { q };
            }
            (Inf, _) | (_, Zero) => {
                let q = Self::pi().ldexp(-1);
                return if y.neg { -q } else { q };
            }
            (_, Inf) => {
                return if x.neg {
                    if y.neg {
                        -Self::pi()
                    } else {
                        Self::pi()
                    }
                } else {
                    Self::signed_zero(y.neg)
                };
            }
            (Normal, Normal) => {}
        }
        // bring both into f64 range before seeding
        let scale = y.exp.max(x.exp);
        let (ys, xs) = (y.ldexp(-scale), x.ldexp(-scale));
        let mut theta = Self::from_f64(ys.to_f64().atan2(xs.to_f64()));
        for _ in 0..Self::newton_steps(2) {
            let (s, c) = theta.sin_cos_impl();
            theta += (ys * c - xs * s) / (xs * c + ys * s);
        }
        theta
    }

    pub(crate) fn cbrt_impl(self) -> Self {
        match self.kind {
            Kind::Normal => {}
            _ => return self,
        }
        let neg = self.neg;
        let a = self.abs_impl();
        let (m, e) = a.frexp();
        // a = f · 2^(3k)
        let r = e.rem_euclid(3);
        let f = m.ldexp(r);
        let k = (e - r) / 3;
        let mut y = Self::from_f64(f.to_f64().cbrt());
        let three = Self::from_u64(3);
        for _ in 0..Self::newton_steps(2) {
            y = y - (y * y * y - f) / (three * y * y);
        }
        let y = y.ldexp(k);
        if neg {
            -y
        } else {
            y
        }
    }

    pub(crate) fn abs_impl(self) -> Self {
        match self.kind {
            Kind::Nan => self,
            _ => Self { neg: false, ..self },
        }
    }
}
