use serde::{Deserialize, Serialize};

use super::factor::factorize;
use super::primes::primes_up_to;
use super::rational::gcd;
use crate::error::{Error, Result};
use crate::sums::eval_complete_sum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PowerClass {
    /// every prime exponent is `< r`
    pub is_free: bool,
    /// every prime exponent is `≥ r`
    pub is_full: bool,
}

pub fn classify_power(m: u64, r: u32) -> PowerClass {
    assert!(m >= 1 && r >= 2);
    let f = factorize(m);
    PowerClass {
        is_free: f.factors.iter().all(|&(_, e)| e < r),
        is_full: f.factors.iter().all(|&(_, e)| e >= r),
    }
}

fn integer_root(x: u64, i: u32) -> u64 {
    let mut r = (x as f64).powf(1.0 / i as f64).round() as u64;
    while r > 0 && (r as u128).pow(i) > x as u128 {
        r -= 1;
    }
    while ((r + 1) as u128).pow(i) <= x as u128 {
        r += 1;
    }
    r
}

/// All `i`-th power full integers in `[1, x]`, ascending; `1` is included.
pub fn enumerate_power_full(i: u32, x: u64) -> Vec<u64> {
    assert!(i >= 2 && x >= 1);
    let primes = primes_up_to(integer_root(x, i));
    let mut out = Vec::new();
    // stack of (value, index of next admissible prime)
    let mut stack = vec![(1u64, 0usize)];
    while let Some((v, start)) = stack.pop() {
        out.push(v);
        for (j, &p) in primes.iter().enumerate().skip(start) {
            let Some(mut w) = (p as u128).checked_pow(i).map(|pi| v as u128 * pi) else {
                break;
            };
            if w > x as u128 {
                break;
            }
            while w <= x as u128 {
                stack.push((w as u64, j + 1));
                w *= p as u128;
            }
        }
    }
    out.sort_unstable();
    out
}

/// `q = q₂·q₃⋯q_k` with pairwise coprime parts: `q₂` cube free, `q_i` `i`-th
/// power full and `(i+1)`-th power free for `3 ≤ i < k`, `q_k` `k`-th power full.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModulusDecomposition {
    pub k: u32,
    /// `parts[j - 2] = q_j`
    pub parts: Vec<u64>,
}

impl ModulusDecomposition {
    pub fn part(&self, j: u32) -> u64 {
        self.parts[(j - 2) as usize]
    }

    pub fn modulus(&self) -> u64 {
        self.parts.iter().product()
    }

    /// `∏_j q_j^{e(j)}`.
    pub fn weighted_product(&self, exponent: impl Fn(u32) -> f64) -> f64 {
        (2..=self.k).map(|j| (self.part(j) as f64).powf(exponent(j))).product()
    }

    /// Checks every power-class condition and pairwise coprimality.
    pub fn is_valid_for(&self, q: u64) -> bool {
        let k = self.k;
        if self.parts.len() != (k - 1) as usize || self.modulus() != q {
            return false;
        }
        for a in 0..self.parts.len() {
            for b in a + 1..self.parts.len() {
                if gcd(self.parts[a], self.parts[b]) != 1 {
                    return false;
                }
            }
        }
        if !classify_power(self.part(2), 3).is_free {
            return false;
        }
        for i in 3..k {
            let full = classify_power(self.part(i), i).is_full;
            let free = classify_power(self.part(i), i + 1).is_free;
            if !(full && free) {
                return false;
            }
        }
        classify_power(self.part(k), k).is_full
    }
}

/// Routes each prime power `p^e ∥ q` by its exponent: `e ≤ 2` to `q₂`,
/// `e = i` (`3 ≤ i < k`) to `q_i`, `e ≥ k` to `q_k`.
pub fn decompose_modulus(q: u64, k: u32) -> Result<ModulusDecomposition> {
    if q == 0 {
        return Err(Error::invalid("modulus must be ≥ 1"));
    }
    if k < 3 {
        return Err(Error::invalid("decomposition needs k ≥ 3"));
    }
    let mut parts = vec![1u64; (k - 1) as usize];
    for (p, e) in factorize(q).factors {
        let slot = if e <= 2 { 2 } else { e.min(k) };
        parts[(slot - 2) as usize] *= p.pow(e);
    }
    Ok(ModulusDecomposition { k, parts })
}

/// `|S_k(b/q; q)| / ∏_{j=2}^k q_j^{1-1/j}`, with `b = (b₁, …, b_k)`.
pub fn gauss_bound_ratio(k: u32, q: u64, b: &[i64]) -> Result<f64> {
    if b.len() != k as usize {
        return Err(Error::invalid(format!("need {k} coefficients, got {}", b.len())));
    }
    let g = b.iter().fold(q, |g, &bj| gcd(g, bj.unsigned_abs() % q.max(1)));
    if q == 0 || g != 1 {
        return Err(Error::invalid(format!("gcd(q, b) = {g} != 1")));
    }
    let dec = decompose_modulus(q, k)?;
    let denom = dec.weighted_product(|j| 1.0 - 1.0 / j as f64);
    Ok(eval_complete_sum(b, q).norm() / denom)
}
