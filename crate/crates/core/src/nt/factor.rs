use serde::{Deserialize, Serialize};
use std::sync::OnceLock;

use super::primes::{is_prime, mul_mod, primes_up_to};
use super::rational::gcd;

const TRIAL_LIMIT: u64 = 1 << 16;

fn trial_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| primes_up_to(TRIAL_LIMIT))
}

/// Prime factorization as `(prime, exponent)` pairs, primes strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Factorization {
    pub factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn value(&self) -> u128 {
        self.factors.iter().map(|&(p, e)| (p as u128).pow(e)).product()
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    fn from_primes(mut primes: Vec<u64>) -> Self {
        primes.sort_unstable();
        let mut factors: Vec<(u64, u32)> = Vec::new();
        for p in primes {
            match factors.last_mut() {
                Some((q, e)) if *q == p => *e += 1,
                _ => factors.push((p, 1)),
            }
        }
        Factorization { factors }
    }
}

/// Brent's variant of Pollard's rho; returns a nontrivial factor of the odd
/// composite `n`.
fn pollard_brent(n: u64) -> u64 {
    const BATCH: u64 = 128;
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut y, mut r, mut q) = (2u64, 1u64, 1u64);
        let mut x;
        let mut ys;
        let mut g;
        loop {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            loop {
                ys = y;
                for _ in 0..BATCH.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd(q, n);
                k += BATCH;
                if k >= r || g != 1 {
                    break;
                }
            }
            r *= 2;
            if g != 1 {
                break;
            }
        }
        if g == n {
            // batch overshot; step one at a time from the saved point
            loop {
                ys = f(ys);
                g = gcd(x.abs_diff(ys), n);
                if g != 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
        c += 1;
    }
}

fn split_large(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let d = pollard_brent(n);
    split_large(d, out);
    split_large(n / d, out);
}

/// Complete factorization of `m ≥ 1`: trial division by primes below 2^16,
/// then Pollard–Brent on the cofactor with Miller–Rabin certifying each
/// prime factor.
pub fn factorize(m: u64) -> Factorization {
    assert!(m >= 1, "factorize needs m ≥ 1");
    let mut rest = m;
    let mut primes = Vec::new();
    for &p in trial_primes() {
        if p * p > rest {
            break;
        }
        while rest.is_multiple_of(p) {
            primes.push(p);
            rest /= p;
        }
    }
    if rest > 1 {
        if rest < TRIAL_LIMIT * TRIAL_LIMIT {
            primes.push(rest);
        } else {
            split_large(rest, &mut primes);
        }
    }
    Factorization::from_primes(primes)
}
