//! Independent reference evaluations used by the integration tests.
//!
//! Phases are reduced exactly with big integers: every finite double is
//! `m·2^e`, so `n·x + n^k·t mod 1` is an exact dyadic fraction. Only the
//! final `cos`/`sin` of a number in `[0, 1)` is done in floating point.
#![allow(dead_code)]

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};

/// Denominator exponent for the exact dyadic expansion.
const SCALE: u32 = 1100;

/// `v·2^SCALE` as an exact integer (`v` finite).
fn scaled(v: f64) -> BigInt {
    assert!(v.is_finite());
    if v == 0.0 {
        return BigInt::zero();
    }
    let bits = v.to_bits();
    let sign = if bits >> 63 == 1 { -1 } else { 1 };
    let exp = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    let (mant, e) = if exp == 0 {
        (frac, -1074)
    } else {
        (frac | (1u64 << 52), exp - 1075)
    };
    let shift = e + SCALE as i64;
    assert!(shift >= 0);
    BigInt::from(sign) * (BigInt::from(mant) << shift as usize)
}

fn unit_from_scaled(theta: &BigInt) -> Complex64 {
    let modulus = BigInt::one() << SCALE as usize;
    let mut r = theta % &modulus;
    if r < BigInt::zero() {
        r += &modulus;
    }
    // top 64 bits of the fraction
    let top = (r >> (SCALE as usize - 64)).to_u64().unwrap();
    let f = top as f64 / 2f64.powi(64);
    let a = std::f64::consts::TAU * f;
    Complex64::new(a.cos(), a.sin())
}

/// `Σ_{n=1}^N e(Σ_j u_j n^j)`.
pub fn poly_sum(u: &[f64], n: u64) -> Complex64 {
    let us: Vec<BigInt> = u.iter().map(|&v| scaled(v)).collect();
    let mut acc = Complex64::new(0.0, 0.0);
    for m in 1..=n {
        let mut theta = BigInt::zero();
        let mut power = BigUint::one();
        for uj in &us {
            power *= m;
            theta += uj * BigInt::from(power.clone());
        }
        acc += unit_from_scaled(&theta);
    }
    acc
}

/// `ω_{N,k}(x, t)`.
pub fn weyl_sum(n: u64, k: u32, x: f64, t: f64) -> Complex64 {
    let mut u = vec![0.0; k as usize];
    u[0] += x;
    u[k as usize - 1] += t;
    if k == 1 {
        u[0] = x + t;
    }
    poly_sum(&u, n)
}

/// `ω_{N,k}(x, a/q)` with the `t`-phase reduced modulo `q` exactly.
pub fn weyl_sum_rational_t(n: u64, k: u32, x: f64, a: i64, q: u64) -> Complex64 {
    let xs = scaled(x);
    let mut acc = Complex64::new(0.0, 0.0);
    for m in 1..=n {
        let r = (BigInt::from(a) * BigInt::from(m).pow(k)) % BigInt::from(q);
        let t_part = (r << SCALE as usize) / BigInt::from(q);
        acc += unit_from_scaled(&(&xs * BigInt::from(m) + t_part));
    }
    acc
}

/// `S_k(a, b, q)` from integer residues.
pub fn gauss_sum(k: u32, a: i64, b: i64, q: u64) -> Complex64 {
    let qi = q as i128;
    (1..=q)
        .map(|n| {
            let nk = (0..k).fold(1i128, |acc, _| acc * n as i128 % qi);
            let r = (a as i128 * nk + b as i128 * n as i128).rem_euclid(qi);
            let ang = std::f64::consts::TAU * r as f64 / q as f64;
            Complex64::new(ang.cos(), ang.sin())
        })
        .sum()
}

/// Composite midpoint rule with `steps` panels for `∫₀^N e(Σ ξ_j z^j) dz`.
pub fn midpoint_integral(xi: &[f64], n: u64, steps: usize) -> Complex64 {
    let h = n as f64 / steps as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..steps {
        let z = (i as f64 + 0.5) * h;
        let mut phase = 0.0;
        let mut zp = 1.0;
        for &c in xi {
            zp *= z;
            phase += c * zp;
        }
        let ang = std::f64::consts::TAU * (phase - phase.floor());
        acc += Complex64::new(ang.cos(), ang.sin());
    }
    acc * h
}

/// Trial-division factorization.
pub fn trial_factor(mut m: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= m {
        let mut e = 0;
        while m.is_multiple_of(p) {
            m /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if m > 1 {
        out.push((m, 1));
    }
    out
}

/// Every `m ≤ x` whose prime exponents are all `≥ i`, by classification.
pub fn power_full_scan(i: u32, x: u64) -> Vec<u64> {
    (1..=x)
        .filter(|&m| trial_factor(m).iter().all(|&(_, e)| e >= i))
        .collect()
}
