use std::num::FpCategory;

use num_traits::{Float, FloatConst, FromPrimitive, Num, NumCast, One, ToPrimitive, Zero};

use super::{BigFloat, Kind};

impl<const N: usize> Zero for BigFloat<N> {
    fn zero() -> Self {
        Self::ZERO
    }
    fn is_zero(&self) -> bool {
        self.kind == Kind::Zero
    }
}

impl<const N: usize> One for BigFloat<N> {
    fn one() -> Self {
        Self::ONE
    }
}

impl<const N: usize> Num for BigFloat<N> {
    type FromStrRadixErr = super::format::ParseBigFloatError;

    fn from_str_radix(s: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        if radix != 10 {
            return Err(super::format::ParseBigFloatError::Radix(radix));
        }
        s.parse()
    }
}

impl<const N: usize> ToPrimitive for BigFloat<N> {
    fn to_i64(&self) -> Option<i64> {
        let t = self.trunc_impl();
        match t.kind {
            Kind::Zero => Some(0),
            Kind::Normal if t.exp <= 63 => {
                let mag = (t.mant[N - 1] >> (64 - t.exp)) as i64;
                Some(if t.neg { -mag } else { mag })
            }
            Kind::Normal if t.exp == 64 && t.neg && t == Self::from_i64(i64::MIN) => Some(i64::MIN),
            _ => None,
        }
    }

    fn to_u64(&self) -> Option<u64> {
        let t = self.trunc_impl();
        match t.kind {
            Kind::Zero => Some(0),
            Kind::Normal if !t.neg && t.exp <= 64 => {
                Some(if t.exp == 64 { t.mant[N - 1] } else { t.mant[N - 1] >> (64 - t.exp) })
            }
            _ => None,
        }
    }

    fn to_f64(&self) -> Option<f64> {
        Some(BigFloat::to_f64(*self))
    }
}

impl<const N: usize> FromPrimitive for BigFloat<N> {
    fn from_i64(n: i64) -> Option<Self> {
        Some(BigFloat::from_i64(n))
    }
    fn from_u64(n: u64) -> Option<Self> {
        Some(BigFloat::from_u64(n))
    }
    fn from_f64(n: f64) -> Option<Self> {
        Some(BigFloat::from_f64(n))
    }
    fn from_f32(n: f32) -> Option<Self> {
        Some(BigFloat::from_f64(n as f64))
    }
}

impl<const N: usize> NumCast for BigFloat<N> {
    fn from<T: ToPrimitive>(n: T) -> Option<Self> {
        match n.to_f64() {
            Some(f) if f.fract() != 0.0 || !f.is_finite() => Some(BigFloat::from_f64(f)),
            // integers go through the exact 64-bit paths when they fit
            _ => n
                .to_i64()
                .map(BigFloat::from_i64)
                .or_else(|| n.to_u64().map(BigFloat::from_u64))
                .or_else(|| n.to_f64().map(BigFloat::from_f64)),
        }
    }
}

impl<const N: usize> Float for BigFloat<N> {
    fn nan() -> Self {
        Self::NAN
    }
    fn infinity() -> Self {
        Self::INFINITY
    }
    fn neg_infinity() -> Self {
        -Self::INFINITY
    }
    fn neg_zero() -> Self {
        -Self::ZERO
    }
    fn min_value() -> Self {
        -Self::max_value()
    }
    fn min_positive_value() -> Self {
        Self::ONE.ldexp(-super::EXP_LIMIT)
    }
    fn max_value() -> Self {
        Self { kind: Kind::Normal, neg: false, exp: super::EXP_LIMIT, mant: [u64::MAX; N] }
    }
    fn epsilon() -> Self {
        Self::ONE.ldexp(1 - Self::BITS as i64)
    }
    fn is_nan(self) -> bool {
        self.kind == Kind::Nan
    }
    fn is_infinite(self) -> bool {
        self.kind == Kind::Inf
    }
    fn is_finite(self) -> bool {
        self.is_finite_raw()
    }
    fn is_normal(self) -> bool {
        self.kind == Kind::Normal
    }
    fn classify(self) -> FpCategory {
        match self.kind {
            Kind::Zero => FpCategory::Zero,
            Kind::Normal => FpCategory::Normal,
            Kind::Inf => FpCategory::Infinite,
            Kind::Nan => FpCategory::Nan,
        }
    }
    fn floor(self) -> Self {
        let t = self.trunc_impl();
        if self.neg && self.has_fraction() {
            t - Self::ONE
        } else {
            t
        }
    }
    fn ceil(self) -> Self {
        let t = self.trunc_impl();
        if !self.neg && self.has_fraction() {
            t + Self::ONE
        } else {
            t
        }
    }
    fn round(self) -> Self {
        let half = Self::ONE.ldexp(-1);
        if self.neg {
            -((-self) + half).floor()
        } else {
            (self + half).floor()
        }
    }
    fn trunc(self) -> Self {
        self.trunc_impl()
    }
    fn fract(self) -> Self {
        self - self.trunc_impl()
    }
    fn abs(self) -> Self {
        self.abs_impl()
    }
    fn signum(self) -> Self {
        match self.kind {
            Kind::Nan => self,
            _ if self.neg => -Self::ONE,
            _ => Self::ONE,
        }
    }
    fn is_sign_positive(self) -> bool {
        !self.neg && self.kind != Kind::Nan
    }
    fn is_sign_negative(self) -> bool {
        self.neg && self.kind != Kind::Nan
    }
    fn mul_add(self, a: Self, b: Self) -> Self {
        self * a + b
    }
    fn recip(self) -> Self {
        self.recip_impl()
    }
    fn powi(self, n: i32) -> Self {
        let mut base = if n < 0 { self.recip_impl() } else { self };
        let mut e = n.unsigned_abs();
        let mut acc = Self::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }
    fn powf(self, n: Self) -> Self {
        if n.kind == Kind::Zero {
            return Self::ONE;
        }
        if self.kind == Kind::Zero {
            return if n.neg { Self::INFINITY } else { Self::ZERO };
        }
        if self.neg {
            // only integral exponents have a real result
            if n.has_fraction() {
                return Self::NAN;
            }
            let mag = (n * self.abs_impl().ln_impl()).exp_impl();
            let odd = n.to_i64().is_some_and(|i| i % 2 != 0) || (n.ldexp(-1).has_fraction());
            return if odd { -mag } else { mag };
        }
        (n * self.ln_impl()).exp_impl()
    }
    fn sqrt(self) -> Self {
        self.sqrt_impl()
    }
    fn exp(self) -> Self {
        self.exp_impl()
    }
    fn exp2(self) -> Self {
        (self * Self::ln2()).exp_impl()
    }
    fn ln(self) -> Self {
        self.ln_impl()
    }
    fn log(self, base: Self) -> Self {
        self.ln_impl() / base.ln_impl()
    }
    fn log2(self) -> Self {
        self.ln_impl() / Self::ln2()
    }
    fn log10(self) -> Self {
        self.ln_impl() / Self::from_u64(10).ln_impl()
    }
    fn max(self, other: Self) -> Self {
        if self.is_nan() || other > self {
            other
        } else {
            self
        }
    }
    fn min(self, other: Self) -> Self {
        if self.is_nan() || other < self {
            other
        } else {
            self
        }
    }
    fn abs_sub(self, other: Self) -> Self {
        if self <= other {
            Self::ZERO
        } else {
            self - other
        }
    }
    fn cbrt(self) -> Self {
        self.cbrt_impl()
    }
    fn hypot(self, other: Self) -> Self {
        (self * self + other * other).sqrt_impl()
    }
    fn sin(self) -> Self {
        self.sin_cos_impl().0
    }
    fn cos(self) -> Self {
        self.sin_cos_impl().1
    }
    fn tan(self) -> Self {
        let (s, c) = self.sin_cos_impl();
        s / c
    }
    fn asin(self) -> Self {
        let c = (Self::ONE - self * self).sqrt_impl();
        self.atan2_impl(c)
    }
    fn acos(self) -> Self {
        let s = (Self::ONE - self * self).sqrt_impl();
        s.atan2_impl(self)
    }
    fn atan(self) -> Self {
        self.atan2_impl(Self::ONE)
    }
    fn atan2(self, other: Self) -> Self {
        self.atan2_impl(other)
    }
    fn sin_cos(self) -> (Self, Self) {
        self.sin_cos_impl()
    }
    fn exp_m1(self) -> Self {
        self.exp_m1_impl()
    }
    fn ln_1p(self) -> Self {
        self.ln_1p_impl()
    }
    fn sinh(self) -> Self {
        let em1 = self.exp_m1_impl();
        // (e^x - e^-x)/2 = (em1 + em1/(em1 + 1))/2
        (em1 + em1 / (em1 + Self::ONE)).ldexp(-1)
    }
    fn cosh(self) -> Self {
        let e = self.exp_impl();
        (e + e.recip_impl()).ldexp(-1)
    }
    fn tanh(self) -> Self {
        if self.kind == Kind::Normal && self.exp > 8 {
            return self.signum();
        }
        let em1 = self.ldexp(1).exp_m1_impl();
        em1 / (em1 + Self::from_u64(2))
    }
    fn asinh(self) -> Self {
        let a = self.abs_impl();
        let r = (a + a * a / (Self::ONE + (a * a + Self::ONE).sqrt_impl())).ln_1p_impl();
        if self.neg {
            -r
        } else {
            r
        }
    }
    fn acosh(self) -> Self {
        if self < Self::ONE {
            return Self::NAN;
        }
        (self + (self * self - Self::ONE).sqrt_impl()).ln_impl()
    }
    fn atanh(self) -> Self {
        (self.ldexp(1) / (Self::ONE - self)).ln_1p_impl().ldexp(-1)
    }
    fn integer_decode(self) -> (u64, i16, i8) {
        let sign = if self.neg { -1 } else { 1 };
        match self.kind {
            Kind::Normal => {
                let m = self.mant[N - 1] >> 11;
                let e = (self.exp - 53).clamp(i16::MIN as i64, i16::MAX as i64) as i16;
                (m, e, sign)
            }
            _ => BigFloat::to_f64(self).integer_decode(),
        }
    }
}

macro_rules! float_consts {
    ($($name:ident => $body:expr),* $(,)?) => {
        impl<const N: usize> FloatConst for BigFloat<N> {
            $(
                #[allow(non_snake_case)]
                fn $name() -> Self {
                    let f: fn() -> BigFloat<N> = $body;
                    f()
                }
            )*
        }
    };
}

float_consts! {
    E => || BigFloat::ONE.exp_impl(),
    FRAC_1_PI => || BigFloat::pi().recip_impl(),
    FRAC_1_SQRT_2 => || BigFloat::from_u64(2).sqrt_impl().ldexp(-1),
    FRAC_2_PI => || BigFloat::pi().recip_impl().ldexp(1),
    FRAC_2_SQRT_PI => || BigFloat::pi().sqrt_impl().recip_impl().ldexp(1),
    FRAC_PI_2 => || BigFloat::pi().ldexp(-1),
    FRAC_PI_3 => || BigFloat::pi().div_u64(3),
    FRAC_PI_4 => || BigFloat::pi().ldexp(-2),
    FRAC_PI_6 => || BigFloat::pi().div_u64(6),
    FRAC_PI_8 => || BigFloat::pi().ldexp(-3),
    LN_10 => || BigFloat::from_u64(10).ln_impl(),
    LN_2 => BigFloat::ln2,
    LOG10_E => || BigFloat::from_u64(10).ln_impl().recip_impl(),
    LOG2_E => || BigFloat::ln2().recip_impl(),
    PI => BigFloat::pi,
    SQRT_2 => || BigFloat::from_u64(2).sqrt_impl(),
}
