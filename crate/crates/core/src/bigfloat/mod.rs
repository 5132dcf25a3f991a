//! Fixed-width software floating point.
//!
//! [`BigFloat<N>`] carries an `N`-limb (64·N bit) binary mantissa and a wide
//! exponent, and implements the `num-traits` float traits so that every
//! generic routine in this crate can run at extended precision. The series
//! oracle uses it to sum terms whose magnitudes exceed the final value by
//! thirty or more decimal orders; `BigFloat<4>` (about 77 significant
//! digits) is the crate-wide [`Extended`](crate::Extended) scalar.
//!
//! Arithmetic rounds to nearest (ties away from zero) with one 64-bit guard
//! limb, so `+`, `-` and `*` are accurate to about half an ulp and `/` and
//! `sqrt` to a couple of ulps. Elementary functions lose a few more bits;
//! see `elementary.rs`.

mod elementary;
mod format;
mod limbs;
mod traits;

use std::cmp::Ordering;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Rem, RemAssign, Sub, SubAssign};

use limbs::SCRATCH;

/// Magnitudes beyond `2^EXP_LIMIT` overflow to infinity, below `2^-EXP_LIMIT` flush to zero.
const EXP_LIMIT: i64 = 1 << 40;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub(crate) enum Kind {
    Zero,
    Normal,
    Inf,
    Nan,
}

/// Binary floating point number with a `64·N`-bit mantissa.
///
/// A normal value is `(-1)^neg · M · 2^(exp - 64N)` where the integer `M`
/// (little-endian limbs) has its top bit set, i.e. `|x| ∈ [2^(exp-1), 2^exp)`.
#[derive(Clone, Copy)]
pub struct BigFloat<const N: usize> {
    kind: Kind,
    neg: bool,
    exp: i64,
    mant: [u64; N],
}

impl<const N: usize> BigFloat<N> {
    const LIMBS_OK: () = assert!(N >= 1 && N <= 8, "BigFloat supports 1..=8 limbs");

    /// Number of mantissa bits.
    pub const BITS: u32 = 64 * N as u32;

    pub const ZERO: Self = Self { kind: Kind::Zero, neg: false, exp: 0, mant: [0; N] };

    pub const NAN: Self = Self { kind: Kind::Nan, neg: false, exp: 0, mant: [0; N] };

    pub const INFINITY: Self = Self { kind: Kind::Inf, neg: false, exp: 0, mant: [0; N] };

    pub const ONE: Self = {
        let mut mant = [0u64; N];
        mant[N - 1] = 1 << 63;
        Self { kind: Kind::Normal, neg: false, exp: 1, mant }
    };

    #[allow(clippy::let_unit_value)]
    fn signed_zero(neg: bool) -> Self {
        let _ = Self::LIMBS_OK;
        Self { neg, ..Self::ZERO }
    }

    fn signed_inf(neg: bool) -> Self {
        Self { neg, ..Self::INFINITY }
    }

    /// Builds a value from an `N + 1` limb buffer whose lowest limb is a
    /// guard limb; the buffer is read as a fraction in `[0, 1)` scaled by `2^exp`.
    fn from_guarded(neg: bool, exp: i64, buf: &mut [u64]) -> Self {
        debug_assert_eq!(buf.len(), N + 1);
        let lz = limbs::leading_zeros(buf);
        if lz as usize == 64 * (N + 1) {
            return Self::signed_zero(neg);
        }
        limbs::shl(buf, lz);
        let mut exp = exp - lz as i64;
        if buf[0] >> 63 == 1 && limbs::increment(&mut buf[1..]) {
            // mantissa rolled over to zero: 0.111..1 + ulp = 1.0
            buf[N] = 1 << 63;
            exp += 1;
        }
        if exp > EXP_LIMIT {
            return Self::signed_inf(neg);
        }
        if exp < -EXP_LIMIT {
            return Self::signed_zero(neg);
        }
        let mut mant = [0u64; N];
        mant.copy_from_slice(&buf[1..]);
        Self { kind: Kind::Normal, neg, exp, mant }
    }

    /// Exact conversion from `f64`.
    pub fn from_f64(x: f64) -> Self {
        if x.is_nan() {
            return Self::NAN;
        }
        if x.is_infinite() {
            return Self::signed_inf(x < 0.0);
        }
        if x == 0.0 {
            return Self::signed_zero(x.is_sign_negative());
        }
        let bits = x.to_bits();
        let neg = bits >> 63 == 1;
        let biased = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        // x = sig · 2^(e2) with sig an integer
        let (sig, e2) = if biased == 0 { (frac, -1074) } else { (frac | (1 << 52), biased - 1075) };
        Self::from_u64_scaled(neg, sig, e2)
    }

    /// `(-1)^neg · sig · 2^e2`, exact.
    fn from_u64_scaled(neg: bool, sig: u64, e2: i64) -> Self {
        if sig == 0 {
            return Self::signed_zero(neg);
        }
        let mut buf = [0u64; SCRATCH];
        buf[N] = sig;
        // buffer fraction is sig / 2^64, so the value is that times 2^(64 + e2)
        Self::from_guarded(neg, 64 + e2, &mut buf[..N + 1])
    }

    pub fn from_u64(v: u64) -> Self {
        Self::from_u64_scaled(false, v, 0)
    }

    pub fn from_i64(v: i64) -> Self {
        Self::from_u64_scaled(v < 0, v.unsigned_abs(), 0)
    }

    /// Nearest `f64` (the guard bits below the top limb are ignored, so
    /// ties may round the wrong way by one f64 ulp in rare cases).
    pub fn to_f64(self) -> f64 {
        match self.kind {
            Kind::Nan => f64::NAN,
            Kind::Zero => {
                if self.neg {
                    -0.0
                } else {
                    0.0
                }
            }
            Kind::Inf => {
                if self.neg {
                    f64::NEG_INFINITY
                } else {
                    f64::INFINITY
                }
            }
            Kind::Normal => {
                let top = self.mant[N - 1];
                // keep a sticky bit from the lower limbs for correct rounding
                let sticky = self.mant[..N - 1].iter().any(|&l| l != 0) as u64;
                let m = (top | sticky) as f64;
                let v = ldexp_f64(m, self.exp - 64);
                if self.neg {
                    -v
                } else {
                    v
                }
            }
        }
    }

    /// Multiplies by `2^k` exactly.
    pub fn ldexp(self, k: i64) -> Self {
        match self.kind {
            Kind::Normal => {
                let exp = self.exp.saturating_add(k);
                if exp > EXP_LIMIT {
                    Self::signed_inf(self.neg)
                } else if exp < -EXP_LIMIT {
                    Self::signed_zero(self.neg)
                } else {
                    Self { exp, ..self }
                }
            }
            _ => self,
        }
    }

    /// Splits a normal value into `(m, e)` with `|m| ∈ [0.5, 1)` and `self = m · 2^e`.
    pub(crate) fn frexp(self) -> (Self, i64) {
        match self.kind {
            Kind::Normal => (Self { exp: 0, ..self }, self.exp),
            _ => (self, 0),
        }
    }

    fn cmp_mag(&self, other: &Self) -> Ordering {
        debug_assert!(self.kind == Kind::Normal && other.kind == Kind::Normal);
        self.exp.cmp(&other.exp).then_with(|| limbs::cmp(&self.mant, &other.mant))
    }

    /// `|a| + |b|` with sign `neg`; requires `|a| >= |b|`, both normal.
    fn add_mag(a: &Self, b: &Self, neg: bool) -> Self {
        let mut x = [0u64; SCRATCH];
        let mut y = [0u64; SCRATCH];
        x[1..=N].copy_from_slice(&a.mant);
        y[1..=N].copy_from_slice(&b.mant);
        let x = &mut x[..N + 1];
        let y = &mut y[..N + 1];
        limbs::shr(y, (a.exp - b.exp) as u64);
        let mut exp = a.exp;
        if limbs::add(x, y) {
            limbs::shr(x, 1);
            x[N] |= 1 << 63;
            exp += 1;
        }
        Self::from_guarded(neg, exp, x)
    }

    /// `|a| - |b|` with sign `neg`; requires `|a| > |b|`, both normal.
    fn sub_mag(a: &Self, b: &Self, neg: bool) -> Self {
        let mut x = [0u64; SCRATCH];
        let mut y = [0u64; SCRATCH];
        x[1..=N].copy_from_slice(&a.mant);
        y[1..=N].copy_from_slice(&b.mant);
        let x = &mut x[..N + 1];
        let y = &mut y[..N + 1];
        limbs::shr(y, (a.exp - b.exp) as u64);
        limbs::sub(x, y);
        Self::from_guarded(neg, a.exp, x)
    }

    fn add_impl(self, rhs: Self) -> Self {
        use Kind::*;
        match (self.kind, rhs.kind) {
            (Nan, _) | (_, Nan) => Self::NAN,
            (Inf, Inf) => {
                if self.neg == rhs.neg {
                    self
                } else {
                    Self::NAN
                }
            }
            (Inf, _) => self,
            (_, Inf) => rhs,
            (Zero, Zero) => Self::signed_zero(self.neg && rhs.neg),
            (Zero, _) => rhs,
            (_, Zero) => self,
            (Normal, Normal) => {
                if self.neg == rhs.neg {
                    if self.cmp_mag(&rhs) == Ordering::Less {
                        Self::add_mag(&rhs, &self, self.neg)
                    } else {
                        Self::add_mag(&self, &rhs, self.neg)
                    }
                } else {
                    match self.cmp_mag(&rhs) {
                        Ordering::Equal => Self::ZERO,
                        Ordering::Greater => Self::sub_mag(&self, &rhs, self.neg),
                        Ordering::Less => Self::sub_mag(&rhs, &self, rhs.neg),
                    }
                }
            }
        }
    }

    fn mul_impl(self, rhs: Self) -> Self {
        use Kind::*;
        let neg = self.neg != rhs.neg;
        match (self.kind, rhs.kind) {
            (Nan, _) | (_, Nan) => Self::NAN,
            (Inf, Zero) | (Zero, Inf) => Self::NAN,
            (Inf, _) | (_, Inf) => Self::signed_inf(neg),
            (Zero, _) | (_, Zero) => Self::signed_zero(neg),
            (Normal, Normal) => {
                let mut p = [0u64; 2 * SCRATCH];
                limbs::mul(&self.mant, &rhs.mant, &mut p[..2 * N]);
                // top N+1 limbs of the 2N-limb product, lowest of them as guard
                Self::from_guarded(neg, self.exp + rhs.exp, &mut p[N - 1..2 * N])
            }
        }
    }

    /// Newton iterations needed to go from 52 correct bits to the full mantissa.
    fn newton_steps(rate: u32) -> u32 {
        let mut bits = 52u32;
        let mut steps = 0;
        while bits < Self::BITS + 8 {
            bits *= rate;
            steps += 1;
        }
        steps
    }

    fn recip_impl(self) -> Self {
        match self.kind {
            Kind::Nan => Self::NAN,
            Kind::Zero => Self::signed_inf(self.neg),
            Kind::Inf => Self::signed_zero(self.neg),
            Kind::Normal => {
                let (m, e) = self.frexp();
                let mut r = Self::from_f64(1.0 / m.to_f64());
                for _ in 0..Self::newton_steps(2) {
                    let err = Self::ONE - m * r;
                    r = r + r * err;
                }
                r.ldexp(-e)
            }
        }
    }

    /// If `self` is a positive integer below `2^64`, returns it.
    fn as_small_integer(&self) -> Option<u64> {
        if self.kind != Kind::Normal || self.neg || self.exp > 64 || self.exp < 1 {
            return None;
        }
        if self.mant[..N - 1].iter().any(|&l| l != 0) {
            return None;
        }
        let top = self.mant[N - 1];
        let shift = 64 - self.exp as u32;
        if shift > 0 && top & ((1u64 << shift) - 1) != 0 {
            return None;
        }
        Some(top >> shift)
    }

    /// Division by a machine integer, used heavily by series and recurrences.
    pub fn div_u64(self, d: u64) -> Self {
        if d == 0 {
            return self / Self::ZERO;
        }
        match self.kind {
            Kind::Normal => {
                let mut buf = [0u64; SCRATCH];
                buf[1..=N].copy_from_slice(&self.mant);
                limbs::div_small(&mut buf[..N + 1], d);
                Self::from_guarded(self.neg, self.exp, &mut buf[..N + 1])
            }
            _ => self,
        }
    }

    fn div_impl(self, rhs: Self) -> Self {
        use Kind::*;
        let neg = self.neg != rhs.neg;
        match (self.kind, rhs.kind) {
            (Nan, _) | (_, Nan) => Self::NAN,
            (Inf, Inf) | (Zero, Zero) => Self::NAN,
            (Inf, _) => Self::signed_inf(neg),
            (_, Inf) => Self::signed_zero(neg),
            (Zero, _) => Self::signed_zero(neg),
            (_, Zero) => Self::signed_inf(neg),
            (Normal, Normal) => {
                if let Some(d) = rhs.as_small_integer() {
                    return self.div_u64(d);
                }
                let r = rhs.recip_impl();
                let q = self * r;
                // one residual correction brings the quotient to ~1 ulp
                q + (self - rhs * q) * r
            }
        }
    }

    pub(crate) fn sqrt_impl(self) -> Self {
        match self.kind {
            Kind::Nan => Self::NAN,
            Kind::Zero => self,
            _ if self.neg => Self::NAN,
            Kind::Inf => self,
            Kind::Normal => {
                let (mut f, e) = self.frexp();
                // self = f · 2^(2k) with f in [0.25, 1)
                let k = if e % 2 == 0 {
                    e / 2
                } else {
                    f = f.ldexp(-1);
                    (e + 1) / 2
                };
                let mut y = Self::from_f64(1.0 / f.to_f64().sqrt());
                for _ in 0..Self::newton_steps(2) {
                    let err = Self::ONE - f * y * y;
                    y = y + (y * err).ldexp(-1);
                }
                let s = f * y;
                let s = s + (y * (f - s * s)).ldexp(-1);
                s.ldexp(k)
            }
        }
    }

    fn cmp_total(&self, other: &Self) -> Option<Ordering> {
        use Kind::*;
        match (self.kind, other.kind) {
            (Nan, _) | (_, Nan) => None,
            (Zero, Zero) => Some(Ordering::Equal),
            _ => {
                let sa = self.sign_class();
                let sb = other.sign_class();
                if sa != sb {
                    return Some(sa.cmp(&sb));
                }
                // same sign, both nonzero
                let mag = match (self.kind, other.kind) {
                    (Inf, Inf) => Ordering::Equal,
                    (Inf, _) => Ordering::Greater,
                    (_, Inf) => Ordering::Less,
                    _ => self.cmp_mag(other),
                };
                Some(if sa < 0 { mag.reverse() } else { mag })
            }
        }
    }

    /// -1, 0 or 1; zeros of either sign map to 0.
    fn sign_class(&self) -> i8 {
        match self.kind {
            Kind::Zero => 0,
            _ if self.neg => -1,
            _ => 1,
        }
    }

    /// Rounds toward zero to an integer.
    pub(crate) fn trunc_impl(self) -> Self {
        if self.kind != Kind::Normal {
            return self;
        }
        if self.exp <= 0 {
            return Self::signed_zero(self.neg);
        }
        if self.exp >= Self::BITS as i64 {
            return self;
        }
        let mut mant = self.mant;
        let frac_bits = Self::BITS as u64 - self.exp as u64;
        limbs::clear_low_bits(&mut mant, frac_bits);
        Self { mant, ..self }
    }

    pub(crate) fn has_fraction(&self) -> bool {
        self.kind == Kind::Normal && *self != self.trunc_impl()
    }
}

pub(crate) fn ldexp_f64(x: f64, k: i64) -> f64 {
    let mut x = x;
    let mut k = k.clamp(-4000, 4000);
    while k > 1000 {
        x *= 2f64.powi(1000);
        k -= 1000;
    }
    while k < -1000 {
        x *= 2f64.powi(-1000);
        k += 1000;
    }
    x * 2f64.powi(k as i32)
}

impl<const N: usize> Default for BigFloat<N> {
    fn default() -> Self {
        Self::ZERO
    }
}

impl<const N: usize> From<f64> for BigFloat<N> {
    fn from(x: f64) -> Self {
        Self::from_f64(x)
    }
}

impl<const N: usize> From<i64> for BigFloat<N> {
    fn from(x: i64) -> Self {
        Self::from_i64(x)
    }
}

impl<const N: usize> PartialEq for BigFloat<N> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp_total(other) == Some(Ordering::Equal)
    }
}

impl<const N: usize> PartialOrd for BigFloat<N> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.cmp_total(other)
    }
}

impl<const N: usize> Neg for BigFloat<N> {
    type Output = Self;
    fn neg(self) -> Self {
        match self.kind {
            Kind::Nan => self,
            _ => Self { neg: !self.neg, ..self },
        }
    }
}

impl<const N: usize> Add for BigFloat<N> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.add_impl(rhs)
    }
}

impl<const N: usize> Sub for BigFloat<N> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.add_impl(-rhs)
    }
}

impl<const N: usize> Mul for BigFloat<N> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.mul_impl(rhs)
    }
}

impl<const N: usize> Div for BigFloat<N> {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        self.div_impl(rhs)
    }
}

impl<const N: usize> Rem for BigFloat<N> {
    type Output = Self;
    /// Truncated remainder, matching `f64 %`.
    fn rem(self, rhs: Self) -> Self {
        if !self.is_finite_raw() || rhs.kind == Kind::Zero || rhs.kind == Kind::Nan {
            return Self::NAN;
        }
        if rhs.kind == Kind::Inf {
            return self;
        }
        self - (self / rhs).trunc_impl() * rhs
    }
}

impl<const N: usize> BigFloat<N> {
    pub(crate) fn is_finite_raw(&self) -> bool {
        matches!(self.kind, Kind::Zero | Kind::Normal)
    }
}

macro_rules! assign_ops {
    ($($tr:ident $f:ident $op:tt),*) => {$(
        impl<const N: usize> $tr for BigFloat<N> {
            fn $f(&mut self, rhs: Self) {
                *self = *self $op rhs;
            }
        }
    )*};
}
assign_ops!(AddAssign add_assign +, SubAssign sub_assign -, MulAssign mul_assign *, DivAssign div_assign /, RemAssign rem_assign %);

impl<const N: usize> std::iter::Sum for BigFloat<N> {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::ZERO, |a, b| a + b)
    }
}
