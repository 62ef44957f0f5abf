//! Exponential sums.
//!
//! All phases are reduced modulo 1 before they reach the unit circle: rational
//! phases through exact integer residues `n^k mod q`, real phases through the
//! error-free products in [`crate::phase`].

mod gauss;
mod grid;
mod major_arc;

pub use gauss::{eval_complete_sum, eval_gauss_sum, linear_coefficient_scan, CompleteSumTable};
pub use grid::{eval_weyl_grid_t, eval_weyl_grid_x, TGridPlan, TGridScan};
pub use major_arc::{major_arc_decompose, ArcCenter, MajorArcDecomposition};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nt::Rational;
use crate::phase::{self, frac_mul, fract1, guarded_pow, unit, GUARD_BITS};

pub type ComplexValue = Complex64;

/// Length `N` and degree `k` of `ω_{N,k}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeylParams {
    n: u64,
    k: u32,
}

impl WeylParams {
    /// Rejects `N = 0`, `k < 2` and `N^k > 2^100`.
    pub fn new(n: u64, k: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("N must be ≥ 1"));
        }
        if k < 2 {
            return Err(Error::invalid("k must be ≥ 2"));
        }
        if guarded_pow(n, k).is_none() {
            return Err(Error::Precision {
                n,
                k,
                guard_bits: GUARD_BITS,
            });
        }
        Ok(WeylParams { n, k })
    }

    pub fn n(self) -> u64 {
        self.n
    }

    pub fn k(self) -> u32 {
        self.k
    }

    /// `N^k`, exact.
    pub fn top_frequency(self) -> u128 {
        (self.n as u128).pow(self.k)
    }
}

/// A point of the torus, each coordinate reduced to `[0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint {
    pub x: f64,
    pub t: f64,
    /// When set, `t` is this fraction and phases `n^k·t` are exact.
    pub exact_t: Option<Rational>,
}

impl PhasePoint {
    pub fn new(x: f64, t: f64) -> Self {
        PhasePoint {
            x: x.rem_euclid(1.0) % 1.0,
            t: t.rem_euclid(1.0) % 1.0,
            exact_t: None,
        }
    }

    pub fn with_exact_t(x: f64, t: Rational) -> Self {
        let t = t.fract();
        PhasePoint {
            x: x.rem_euclid(1.0) % 1.0,
            t: t.to_f64(),
            exact_t: Some(t),
        }
    }
}

/// `ω_{N,k}(x,t) = Σ_{n=1}^N e(nx + n^k t)`.
pub fn eval_weyl_sum(params: WeylParams, pt: &PhasePoint) -> ComplexValue {
    let k = params.k;
    let mut acc = Complex64::new(0.0, 0.0);
    match pt.exact_t {
        Some(r) => {
            let q = r.den();
            let b = r.num().rem_euclid(q as i64) as u128;
            for n in 1..=params.n {
                let residue = phase::pow_mod(n, k, q) as u128 * b % q as u128;
                let theta = frac_mul(n as u128, pt.x) + residue as f64 / q as f64;
                acc += unit(fract1(theta));
            }
        }
        None => {
            let mut nk: u128;
            for n in 1..=params.n {
                nk = (n as u128).pow(k);
                let theta = frac_mul(n as u128, pt.x) + frac_mul(nk, pt.t);
                acc += unit(fract1(theta));
            }
        }
    }
    acc
}

/// `S_k(u; N) = Σ_{n=1}^N e(u₁n + u₂n² + ⋯ + u_k n^k)`.
pub fn eval_general_sum(u: &[f64], n: u64) -> Result<ComplexValue> {
    let k = u.len() as u32;
    if k < 2 {
        return Err(Error::invalid("coefficient vector needs length ≥ 2"));
    }
    WeylParams::new(n, k)?;
    let mut acc = Complex64::new(0.0, 0.0);
    for m in 1..=n {
        let mut power = 1u128;
        let mut theta = 0.0;
        for &uj in u {
            power *= m as u128;
            if uj != 0.0 {
                theta += frac_mul(power, uj);
            }
        }
        acc += unit(fract1(theta));
    }
    Ok(acc)
}
