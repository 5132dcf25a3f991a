//! Little-endian multi-limb integer helpers (`buf[len-1]` is most significant).

use std::cmp::Ordering;

/// Scratch size for stack buffers: up to 8 mantissa limbs plus a guard limb.
pub(super) const SCRATCH: usize = 9;

pub(super) fn leading_zeros(buf: &[u64]) -> u32 {
    let mut n = 0;
    for &l in buf.iter().rev() {
        if l == 0 {
            n += 64;
        } else {
            return n + l.leading_zeros();
        }
    }
    n
}

pub(super) fn shl(buf: &mut [u64], s: u32) {
    let len = buf.len();
    let limbs = (s / 64) as usize;
    let bits = s % 64;
    if limbs >= len {
        buf.fill(0);
        return;
    }
    if limbs > 0 {
        for i in (limbs..len).rev() {
            buf[i] = buf[i - limbs];
        }
        buf[..limbs].fill(0);
    }
    if bits > 0 {
        for i in (1..len).rev() {
            buf[i] = (buf[i] << bits) | (buf[i - 1] >> (64 - bits));
        }
        buf[0] <<= bits;
    }
}

/// Logical shift right; bits shifted past the bottom are dropped.
pub(super) fn shr(buf: &mut [u64], s: u64) {
    let len = buf.len();
    if s >= 64 * len as u64 {
        buf.fill(0);
        return;
    }
    let limbs = (s / 64) as usize;
    let bits = (s % 64) as u32;
    if limbs > 0 {
        for i in 0..len - limbs {
            buf[i] = buf[i + limbs];
        }
        buf[len - limbs..].fill(0);
    }
    if bits > 0 {
        for i in 0..len - 1 {
            buf[i] = (buf[i] >> bits) | (buf[i + 1] << (64 - bits));
        }
        buf[len - 1] >>= bits;
    }
}

/// `a += b`, returns the carry out.
pub(super) fn add(a: &mut [u64], b: &[u64]) -> bool {
    let mut carry = false;
    for (x, &y) in a.iter_mut().zip(b) {
        let (s1, c1) = x.overflowing_add(y);
        let (s2, c2) = s1.overflowing_add(carry as u64);
        *x = s2;
        carry = c1 || c2;
    }
    carry
}

/// `a -= b`; requires `a >= b`.
pub(super) fn sub(a: &mut [u64], b: &[u64]) {
    let mut borrow = false;
    for (x, &y) in a.iter_mut().zip(b) {
        let (d1, b1) = x.overflowing_sub(y);
        let (d2, b2) = d1.overflowing_sub(borrow as u64);
        *x = d2;
        borrow = b1 || b2;
    }
    debug_assert!(!borrow);
}

/// Adds one; returns true when the value wrapped to zero.
pub(super) fn increment(a: &mut [u64]) -> bool {
    for x in a.iter_mut() {
        let (s, c) = x.overflowing_add(1);
        *x = s;
        if !c {
            return false;
        }
    }
    true
}

pub(super) fn cmp(a: &[u64], b: &[u64]) -> Ordering {
    for (x, y) in a.iter().rev().zip(b.iter().rev()) {
        match x.cmp(y) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    Ordering::Equal
}

/// Schoolbook product; `out.len() == a.len() + b.len()`.
pub(super) fn mul(a: &[u64], b: &[u64], out: &mut [u64]) {
    out.fill(0);
    for (i, &x) in a.iter().enumerate() {
        let mut carry: u128 = 0;
        for (j, &y) in b.iter().enumerate() {
            let cur = out[i + j] as u128 + (x as u128) * (y as u128) + carry;
            out[i + j] = cur as u64;
            carry = cur >> 64;
        }
        out[i + b.len()] = carry as u64;
    }
}

/// In-place division by a single limb; returns the remainder.
pub(super) fn div_small(buf: &mut [u64], d: u64) -> u64 {
    let mut rem: u128 = 0;
    for x in buf.iter_mut().rev() {
        let cur = (rem << 64) | *x as u128;
        *x = (cur / d as u128) as u64;
        rem = cur % d as u128;
    }
    rem as u64
}

pub(super) fn clear_low_bits(buf: &mut [u64], n: u64) {
    let full = (n / 64) as usize;
    for x in buf.iter_mut().take(full) {
        *x = 0;
    }
    let rest = n % 64;
    if rest > 0 && full < buf.len() {
        buf[full] &= !((1u64 << rest) - 1);
    }
}
