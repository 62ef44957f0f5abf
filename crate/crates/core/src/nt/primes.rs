use crate::error::{Error, Result};
use crate::par::{self, Exec};

const SEGMENT: u64 = 1 << 18;
const MAX_SIEVE: u64 = 1 << 40;

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    (a as u128 * b as u128 % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin; the first twelve prime bases are a complete
/// witness set below 2^64.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Eratosthenes on `[0, n]`.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i * i;
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    out
}

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

fn sieve_segment(lo: u64, hi: u64, base: &[u64]) -> Vec<u64> {
    let len = (hi - lo + 1) as usize;
    let mut composite = vec![false; len];
    for &p in base {
        if p * p > hi {
            break;
        }
        let start = (lo.div_ceil(p) * p).max(p * p);
        let mut j = start;
        while j <= hi {
            composite[(j - lo) as usize] = true;
            j += p;
        }
    }
    (0..len)
        .filter(|&i| !composite[i] && lo + i as u64 >= 2)
        .map(|i| lo + i as u64)
        .collect()
}

/// All primes in `[lo, hi]`, ascending, by a segmented sieve.
pub fn primes_in(lo: u64, hi: u64) -> Result<Vec<u64>> {
    primes_in_with(lo, hi, Exec::default())
}

pub fn primes_in_with(lo: u64, hi: u64, exec: Exec) -> Result<Vec<u64>> {
    if lo > hi {
        return Err(Error::invalid(format!("empty range [{lo}, {hi}]")));
    }
    if hi > MAX_SIEVE {
        return Err(Error::invalid(format!("hi = {hi} exceeds 2^40")));
    }
    let base = primes_up_to(isqrt(hi));
    let starts: Vec<u64> = (lo..=hi).step_by(SEGMENT as usize).collect();
    let segments = par::map(exec, &starts, |&s| sieve_segment(s, (s + SEGMENT - 1).min(hi), &base));
    Ok(segments.concat())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_ranges() {
        assert_eq!(primes_in(2, 10).unwrap(), vec![2, 3, 5, 7]);
        assert_eq!(primes_in(10, 20).unwrap(), vec![11, 13, 17, 19]);
        assert_eq!(primes_in(0, 1).unwrap(), Vec::<u64>::new());
        assert!(primes_in(5, 4).is_err());
        assert!(primes_in(1, (1 << 40) + 1).is_err());
    }

    #[test]
    fn segment_boundaries_match_plain_sieve() {
        let hi = 3 * SEGMENT + 17;
        let plain: Vec<u64> = primes_up_to(hi).into_iter().filter(|&p| p >= 1000).collect();
        assert_eq!(primes_in(1000, hi).unwrap(), plain);
        assert_eq!(
            primes_in_with(1000, hi, Exec::Sequential).unwrap(),
            primes_in_with(1000, hi, Exec::Parallel).unwrap()
        );
    }

    #[test]
    fn miller_rabin_edges() {
        assert!(!is_prime(0) && !is_prime(1));
        assert!(is_prime(2) && is_prime(37) && !is_prime(39));
        // strong pseudoprime to bases 2..37 except the full set
        assert!(!is_prime(3_825_123_056_546_413_051));
        assert!(is_prime(18_446_744_073_709_551_557));
        assert!(!is_prime(561));
    }
}
