use std::fmt;
use std::str::FromStr;

use super::{BigFloat, Kind};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseBigFloatError {
    #[error("invalid decimal literal {0:?}")]
    Invalid(String),
    #[error("only radix 10 is supported, got {0}")]
    Radix(u32),
}

impl<const N: usize> BigFloat<N> {
    /// Decimal digits that the mantissa can faithfully represent.
    pub const DIGITS: usize = (64 * N * 30103) / 100_000;

    fn ten() -> Self {
        Self::from_u64(10)
    }

    /// Scientific notation with `digits` significant digits, e.g. `-1.2500e-3`.
    pub fn to_scientific(self, digits: usize) -> String {
        let digits = digits.max(1);
        match self.kind {
            Kind::Nan => return "NaN".into(),
            Kind::Inf => return if self.neg { "-inf".into() } else { "inf".into() },
            Kind::Zero => {
                let sign = if self.neg { "-" } else { "" };
                return if digits == 1 {
                    format!("{sign}0e0")
                } else {
                    format!("{sign}0.{}e0", "0".repeat(digits - 1))
                };
            }
            Kind::Normal => {}
        }
        let a = self.abs_impl();
        let (m, e) = a.frexp();
        let log10 = (e as f64) * std::f64::consts::LOG10_2 + m.to_f64().log10();
        let mut e10 = log10.floor() as i64;
        let mut y = if e10 >= 0 {
            a / num_traits::Float::powi(Self::ten(), e10 as i32)
        } else {
            a * num_traits::Float::powi(Self::ten(), (-e10) as i32)
        };
        if y >= Self::ten() {
            y = y.div_u64(10);
            e10 += 1;
        } else if y < Self::ONE {
            y *= Self::ten();
            e10 -= 1;
        }
        let mut ds: Vec<u8> = Vec::with_capacity(digits + 1);
        for _ in 0..=digits {
            let d = y.to_f64().floor().clamp(0.0, 9.0) as u8;
            ds.push(d);
            y = (y - Self::from_u64(d as u64)) * Self::ten();
        }
        // round half up on the extra digit
        let extra = ds.pop().unwrap_or(0);
        if extra >= 5 {
            let mut i = ds.len();
            loop {
                if i == 0 {
                    ds.insert(0, 1);
                    ds.pop();
                    e10 += 1;
                    break;
                }
                i -= 1;
                if ds[i] == 9 {
                    ds[i] = 0;
                } else {
                    ds[i] += 1;
                    break;
                }
            }
        }
        let mut s = String::with_capacity(digits + 8);
        if self.neg {
            s.push('-');
        }
        s.push((b'0' + ds[0]) as char);
        if ds.len() > 1 {
            s.push('.');
            s.extend(ds[1..].iter().map(|d| (b'0' + d) as char));
        }
        s.push_str(&format!("e{e10}"));
        s
    }
}

impl<const N: usize> fmt::Display for BigFloat<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().map_or(Self::DIGITS, |p| p + 1);
        let s = self.to_scientific(digits);
        match f.width() {
            Some(w) if matches!(f.align(), Some(fmt::Alignment::Left)) => write!(f, "{s:<w$}"),
            Some(w) => write!(f, "{s:>w$}"),
            None => f.write_str(&s),
        }
    }
}

impl<const N: usize> fmt::LowerExp for BigFloat<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<const N: usize> fmt::Debug for BigFloat<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BigFloat<{N}>({})", self.to_scientific(Self::DIGITS))
    }
}

impl<const N: usize> FromStr for BigFloat<N> {
    type Err = ParseBigFloatError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let invalid = || ParseBigFloatError::Invalid(s.to_string());
        let t = s.trim();
        let (neg, body) = match t.as_bytes().first() {
            Some(b'-') => (true, &t[1..]),
            Some(b'+') => (false, &t[1..]),
            _ => (false, t),
        };
        let lower = body.to_ascii_lowercase();
        if lower == "inf" || lower == "infinity" {
            return Ok(if neg { -Self::INFINITY } else { Self::INFINITY });
        }
        if lower == "nan" {
            return Ok(Self::NAN);
        }
        let (mantissa, exponent) = match lower.find('e') {
            Some(i) => (&lower[..i], lower[i + 1..].parse::<i64>().map_err(|_| invalid())?),
            None => (lower.as_str(), 0),
        };
        let (int_part, frac_part) = match mantissa.find('.') {
            Some(i) => (&mantissa[..i], &mantissa[i + 1..]),
            None => (mantissa, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(invalid());
        }
        let ten = Self::ten();
        let mut v = Self::ZERO;
        for c in int_part.bytes().chain(frac_part.bytes()) {
            if !c.is_ascii_digit() {
                return Err(invalid());
            }
            v = v * ten + Self::from_u64((c - b'0') as u64);
        }
        let scale = exponent - frac_part.len() as i64;
        let scale = i32::try_from(scale).map_err(|_| invalid())?;
        if scale > 0 {
            v *= num_traits::Float::powi(ten, scale);
        } else if scale < 0 {
            v /= num_traits::Float::powi(ten, -scale);
        }
        Ok(if neg { -v } else { v })
    }
}
