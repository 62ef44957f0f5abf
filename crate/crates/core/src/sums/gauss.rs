use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::phase::{pow_mod, unit};

/// Unit roots `e(j/q)` and residues `n^k mod q` for repeated complete sums
/// with a fixed modulus.
#[derive(Debug, Clone)]
pub struct CompleteSumTable {
    q: u64,
    roots: Vec<Complex64>,
    powers: Vec<u64>,
}

impl CompleteSumTable {
    pub fn new(k: u32, q: u64) -> Self {
        assert!(q >= 1);
        let roots = (0..q).map(|j| unit(j as f64 / q as f64)).collect();
        let powers = (1..=q).map(|n| pow_mod(n, k, q)).collect();
        CompleteSumTable { q, roots, powers }
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    /// `S_k(a, b, q) = Σ_{n=1}^q e((a·n^k + b·n)/q)`.
    pub fn sum(&self, a: i64, b: i64) -> Complex64 {
        let q = self.q;
        let a = a.rem_euclid(q as i64) as u64;
        let b = b.rem_euclid(q as i64) as u64;
        let mut acc = Complex64::new(0.0, 0.0);
        let mut linear = 0u64;
        for &p in &self.powers {
            linear += b;
            if linear >= q {
                linear -= q;
            }
            let j = ((a as u128 * p as u128 + linear as u128) % q as u128) as usize;
            acc += self.roots[j];
        }
        acc
    }
}

/// `S_k(a, b, q) = Σ_{n=1}^q e((a/q)n^k + (b/q)n)`; `a` multiplies `n^k`,
/// `b` multiplies `n`.
pub fn eval_gauss_sum(k: u32, a: i64, b: i64, q: u64) -> Complex64 {
    assert!(q >= 1, "modulus must be ≥ 1");
    let qi = q as i64;
    let a = a.rem_euclid(qi) as u128;
    let b = b.rem_euclid(qi) as u128;
    let mut acc = Complex64::new(0.0, 0.0);
    for n in 1..=q {
        let p = pow_mod(n, k, q) as u128;
        let j = (a * p + b * n as u128) % q as u128;
        acc += unit(j as f64 / q as f64);
    }
    acc
}

/// `S_k(b/q; q) = Σ_{n=1}^q e((b₁n + b₂n² + ⋯ + b_k n^k)/q)` with `k = b.len()`.
pub fn eval_complete_sum(b: &[i64], q: u64) -> Complex64 {
    assert!(q >= 1, "modulus must be ≥ 1");
    let qi = q as i64;
    let coeffs: Vec<u128> = b.iter().map(|&c| c.rem_euclid(qi) as u128).collect();
    let mut acc = Complex64::new(0.0, 0.0);
    for n in 1..=q {
        let mut power = 1u128;
        let mut j = 0u128;
        for &c in &coeffs {
            power = power * n as u128 % q as u128;
            j = (j + c * power) % q as u128;
        }
        acc += unit(j as f64 / q as f64);
    }
    acc
}

/// `S_k(top, b, q)` for every `b ∈ [0, q)` at once: a length-`q` DFT of the
/// sequence `e(top·n^k/q)`.
pub fn linear_coefficient_scan(k: u32, top: i64, q: u64) -> Vec<Complex64> {
    assert!(q >= 1);
    let top = top.rem_euclid(q as i64) as u128;
    let mut buf: Vec<Complex64> = (0..q)
        .map(|n| {
            let j = top * pow_mod(n, k, q) as u128 % q as u128;
            unit(j as f64 / q as f64)
        })
        .collect();
    let plan = FftPlanner::new().plan_fft_inverse(q as usize);
    plan.process(&mut buf);
    buf
}
