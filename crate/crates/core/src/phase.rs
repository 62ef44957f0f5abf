//! Phase reduction.
//!
//! A phase `n^k·t` with `n^k` near `2^100` and `t` an arbitrary double has far
//! more integer bits than a double can hold, so `(n^k as f64) * t` loses the
//! fractional part entirely. Instead we split `n^k = hi + lo` into two doubles
//! holding at most 53 significant bits each and form the four-term error-free
//! expansion `hi·t = p₁ + e₁`, `lo·t = p₂ + e₂` (FMA `TwoProd`). Each term's
//! fractional part is exact in binary floating point, so the reduced phase is
//! accurate to a few ulps of 1 regardless of the magnitude of `n^k`.

use num_complex::Complex64;
use std::f64::consts::TAU;

/// Largest power exponent accepted by the compensated phase path.
pub const GUARD_BITS: u32 = 100;

/// `(s, e)` with `s + e = a + b` exactly.
#[inline]
pub fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let v = s - a;
    let e = (a - (s - v)) + (b - v);
    (s, e)
}

/// `(p, e)` with `p + e = a·b` exactly (barring underflow).
#[inline]
pub fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let e = a.mul_add(b, -p);
    (p, e)
}

/// Fractional part in `[0, 1)`. Exact for every finite double.
#[inline]
pub fn fract1(v: f64) -> f64 {
    let f = v - v.floor();
    // v slightly below an integer can round to exactly 1.0 only through the
    // subtraction of a huge floor; keep the half-open range regardless.
    if f >= 1.0 {
        0.0
    } else {
        f
    }
}

/// Splits `m < 2^106` into two doubles whose sum is exactly `m`.
#[inline]
pub fn split_u128(m: u128) -> (f64, f64) {
    debug_assert!(m < 1u128 << 106);
    let bits = 128 - m.leading_zeros();
    if bits <= 53 {
        (m as f64, 0.0)
    } else {
        let shift = bits - 53;
        let hi = (m >> shift) << shift;
        (hi as f64, (m - hi) as f64)
    }
}

/// `m·t mod 1` for an exact integer `m < 2^106`.
#[inline]
pub fn frac_mul(m: u128, t: f64) -> f64 {
    let (hi, lo) = split_u128(m);
    let (p1, e1) = two_prod(hi, t);
    if lo == 0.0 {
        return fract1(fract1(p1) + fract1(e1));
    }
    let (p2, e2) = two_prod(lo, t);
    fract1(fract1(p1) + fract1(e1) + fract1(p2) + fract1(e2))
}

/// `e(θ) = exp(2πiθ)`, reducing `θ` to `[-1/2, 1/2]` first.
#[inline]
pub fn unit(theta: f64) -> Complex64 {
    let r = theta - theta.round();
    let (s, c) = (TAU * r).sin_cos();
    Complex64::new(c, s)
}

/// `n^k` if it does not exceed `2^GUARD_BITS`.
pub fn guarded_pow(n: u64, k: u32) -> Option<u128> {
    let mut acc: u128 = 1;
    for _ in 0..k {
        acc = acc.checked_mul(n as u128)?;
        if acc > 1u128 << GUARD_BITS {
            return None;
        }
    }
    Some(acc)
}

/// `base^exp mod m` for `m ≥ 1`.
pub fn pow_mod(base: u64, exp: u32, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let m = m as u128;
    let mut b = base as u128 % m;
    let mut e = exp;
    let mut acc: u128 = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc as u64
}
