use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Reduced fraction `num/den` with `den ≥ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Rational {
    num: i64,
    den: u64,
}

impl Rational {
    pub fn new(num: i64, den: u64) -> Result<Self> {
        if den == 0 {
            return Err(Error::invalid("rational with zero denominator"));
        }
        let g = gcd(num.unsigned_abs(), den).max(1);
        Ok(Rational {
            num: num / g as i64,
            den: den / g,
        })
    }

    pub const fn integer(v: i64) -> Self {
        Rational { num: v, den: 1 }
    }

    pub fn num(self) -> i64 {
        self.num
    }

    pub fn den(self) -> u64 {
        self.den
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// Representative in `[0, 1)`.
    pub fn fract(self) -> Self {
        Rational {
            num: self.num.rem_euclid(self.den as i64),
            den: self.den,
        }
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        let l = self.num as i128 * other.den as i128;
        let r = other.num as i128 * self.den as i128;
        l.cmp(&r)
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

const DEN_CAP: f64 = (1u64 << 62) as f64;
const FRACTION_BITS: i32 = 120;

/// Last continued-fraction convergent `a/q` of `alpha` with `q ≤ M`.
///
/// Every convergent satisfies `|α − p_n/q_n| ≤ 1/(q_n q_{n+1})`, and the
/// next denominator exceeds `M`, so the result obeys `|α − a/q| ≤ 1/(qM)`.
/// The expansion runs on the exact binary value of `alpha` (fractional bits
/// below `2^-120` are dropped), so no partial quotient is corrupted by
/// floating-point drift.
pub fn dirichlet_approx(alpha: f64, m: f64) -> Rational {
    assert!(alpha.is_finite(), "dirichlet_approx needs a finite alpha");
    let m = if m.is_nan() { 1.0 } else { m.clamp(1.0, DEN_CAP) };
    let qmax = m.floor() as u128;

    let whole = alpha.floor();
    let frac = alpha - whole;
    let whole = whole as i128;
    if frac == 0.0 {
        return Rational::integer(whole as i64);
    }

    // frac = num / 2^120 exactly (up to bits below 2^-120)
    let mut num = (frac * 2f64.powi(FRACTION_BITS)) as u128;
    let mut den = 1u128 << FRACTION_BITS;
    if num == 0 {
        return Rational::integer(whole as i64);
    }
    let tz = num.trailing_zeros().min(FRACTION_BITS as u32);
    num >>= tz;
    den >>= tz;

    // convergents of num/den in [0, 1): start from 0/1 and 1/0
    let (mut p_prev, mut q_prev) = (1u128, 0u128);
    let (mut p, mut q) = (0u128, 1u128);
    // num/den = [0; a₁, a₂, …]; Euclid on (den, num) yields a₁, a₂, …
    let (mut a, mut b) = (den, num);
    while b != 0 {
        let quotient = a / b;
        let (p_next, q_next) = (quotient * p + p_prev, quotient * q + q_prev);
        if q_next > qmax {
            break;
        }
        (p_prev, q_prev, p, q) = (p, q, p_next, q_next);
        (a, b) = (b, a - quotient * b);
    }
    let num = whole * q as i128 + p as i128;
    Rational {
        num: num as i64,
        den: q as u64,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduces_on_construction() {
        let r = Rational::new(-6, 8).unwrap();
        assert_eq!((r.num(), r.den()), (-3, 4));
        assert!(Rational::new(1, 0).is_err());
        assert_eq!(Rational::new(0, 5).unwrap(), Rational::integer(0));
    }

    #[test]
    fn fract_wraps_negative() {
        assert_eq!(Rational::new(-1, 3).unwrap().fract(), Rational::new(2, 3).unwrap());
    }

    #[test]
    fn ordering_cross_multiplies() {
        let a = Rational::new(1, 3).unwrap();
        let b = Rational::new(2, 5).unwrap();
        assert!(a < b);
    }

    #[test]
    fn dirichlet_examples() {
        assert_eq!(dirichlet_approx(0.0, 5.0), Rational::integer(0));
        assert_eq!(dirichlet_approx(1.0 / 3.0, 10.0), Rational::new(1, 3).unwrap());
        let r = dirichlet_approx(std::f64::consts::PI - 3.0, 100.0);
        assert_eq!(r, Rational::new(1, 7).unwrap());
        assert!((std::f64::consts::PI - 3.0 - 1.0 / 7.0).abs() <= 1.0 / 700.0);
    }

    #[test]
    fn dirichlet_negative_and_large() {
        let r = dirichlet_approx(-2.25, 10.0);
        assert_eq!(r, Rational::new(-9, 4).unwrap());
        let r = dirichlet_approx(std::f64::consts::PI, 1000.0);
        assert_eq!(r, Rational::new(355, 113).unwrap());
    }

    #[test]
    fn dirichlet_m_one_picks_integer_convergent() {
        // 0.9 = [0; 1, 9]: the convergent 1/1 still has q ≤ 1
        assert_eq!(dirichlet_approx(0.9, 1.0), Rational::integer(1));
        assert_eq!(dirichlet_approx(0.2, 1.0), Rational::integer(0));
    }
}
