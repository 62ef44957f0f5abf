use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::{ComplexValue, WeylParams};
use crate::error::{Error, Result};
use crate::phase::{frac_mul, unit};

fn check_grid(m: usize) -> Result<()> {
    if m == 0 || !m.is_power_of_two() {
        return Err(Error::invalid(format!("grid size {m} is not a power of two")));
    }
    Ok(())
}

/// `ω_{N,k}(m/M, t)` for `m = 0, …, M-1`.
///
/// Coefficients `e(n^k t)` are folded to index `n mod M`, then one inverse
/// (positive-exponent, unnormalized) FFT evaluates the trigonometric
/// polynomial on the grid.
pub fn eval_weyl_grid_x(params: WeylParams, t: f64, m: usize) -> Result<Vec<ComplexValue>> {
    check_grid(m)?;
    let t = t.rem_euclid(1.0);
    let mask = m as u64 - 1;
    let mut buf = vec![Complex64::new(0.0, 0.0); m];
    for n in 1..=params.n() {
        let nk = (n as u128).pow(params.k());
        buf[(n & mask) as usize] += unit(frac_mul(nk, t));
    }
    FftPlanner::new().plan_fft_inverse(m).process(&mut buf);
    Ok(buf)
}

/// `ω_{N,k}(x, m/M)` for `m = 0, …, M-1`; coefficient `e(nx)` sits at
/// index `n^k mod M`.
pub fn eval_weyl_grid_t(params: WeylParams, x: f64, m: usize) -> Result<Vec<ComplexValue>> {
    let mut plan = TGridPlan::new(params, m)?;
    let mut out = vec![Complex64::new(0.0, 0.0); m];
    plan.eval_into(x, &mut out);
    Ok(out)
}

/// Reusable t-grid evaluator: the FFT plan, the folded indices `n^k mod M`
/// and the scratch space are built once per `(N, k, M)`.
pub struct TGridPlan {
    params: WeylParams,
    fft: Arc<dyn Fft<f64>>,
    indices: Vec<usize>,
    scratch: Vec<Complex64>,
}

impl TGridPlan {
    pub fn new(params: WeylParams, m: usize) -> Result<Self> {
        check_grid(m)?;
        let fft = FftPlanner::new().plan_fft_inverse(m);
        let mask = m as u64 - 1;
        let indices = (1..=params.n())
            .map(|n| {
                let mut v = 1u64;
                for _ in 0..params.k() {
                    v = v.wrapping_mul(n);
                }
                (v & mask) as usize
            })
            .collect();
        let scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
        Ok(TGridPlan {
            params,
            fft,
            indices,
            scratch,
        })
    }

    pub fn len(&self) -> usize {
        self.fft.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fft.len() == 0
    }

    pub fn params(&self) -> WeylParams {
        self.params
    }

    /// Writes `ω(x, m/M)` into `out` (`out.len() == M`).
    pub fn eval_into(&mut self, x: f64, out: &mut [Complex64]) {
        assert_eq!(out.len(), self.len());
        let x = x.rem_euclid(1.0);
        out.fill(Complex64::new(0.0, 0.0));
        for (n, &idx) in (1u64..).zip(&self.indices) {
            out[idx] += unit(frac_mul(n as u128, x));
        }
        self.fft.process_with_scratch(out, &mut self.scratch);
    }
}

/// Block length of the inner transforms in [`TGridScan`].
const SCAN_BLOCK: usize = 1 << 12;

/// Location of the largest `|ω(x, j/M)|` without storing the grid.
///
/// With `M = P·Q` and `j = a + P·b`, the frequency `f = n^k mod M` gives
/// `e(f·j/M) = e(f·a/M)·e((f mod Q)·b/Q)`, so each residue class `a mod P`
/// is one length-`Q` inverse FFT of `N` twiddled coefficients. The work is
/// `M log Q + P·N` and every transform stays in cache.
pub struct TGridScan {
    params: WeylParams,
    m: usize,
    block: usize,
    fft: Arc<dyn Fft<f64>>,
    freqs: Vec<u64>,
    coeffs: Vec<Complex64>,
    buf: Vec<Complex64>,
    scratch: Vec<Complex64>,
}

impl TGridScan {
    pub fn new(params: WeylParams, m: usize) -> Result<Self> {
        check_grid(m)?;
        let block = m.min(SCAN_BLOCK);
        let fft = FftPlanner::new().plan_fft_inverse(block);
        let mask = m as u64 - 1;
        let freqs = (1..=params.n())
            .map(|n| {
                let mut v = 1u64;
                for _ in 0..params.k() {
                    v = v.wrapping_mul(n);
                }
                v & mask
            })
            .collect();
        let scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
        Ok(TGridScan {
            params,
            m,
            block,
            fft,
            freqs,
            coeffs: Vec::with_capacity(params.n() as usize),
            buf: vec![Complex64::new(0.0, 0.0); block],
            scratch,
        })
    }

    pub fn len(&self) -> usize {
        self.m
    }

    pub fn is_empty(&self) -> bool {
        self.m == 0
    }

    pub fn params(&self) -> WeylParams {
        self.params
    }

    /// `(j, |ω(x, j/M)|²)` for the smallest `j` attaining the maximum.
    pub fn argmax(&mut self, x: f64) -> (usize, f64) {
        let x = x.rem_euclid(1.0);
        self.coeffs.clear();
        self.coeffs
            .extend((1..=self.params.n()).map(|n| unit(frac_mul(n as u128, x))));
        let p = self.m / self.block;
        let q_mask = self.block as u64 - 1;
        let m = self.m as u128;
        let mut best = (0usize, f64::NEG_INFINITY);
        for a in 0..p {
            self.buf.fill(Complex64::new(0.0, 0.0));
            for (&f, &c) in self.freqs.iter().zip(&self.coeffs) {
                let twiddle = if a == 0 {
                    c
                } else {
                    c * unit((f as u128 * a as u128 % m) as f64 / self.m as f64)
                };
                self.buf[(f & q_mask) as usize] += twiddle;
            }
            self.fft.process_with_scratch(&mut self.buf, &mut self.scratch);
            for (b, v) in self.buf.iter().enumerate() {
                let s = v.norm_sqr();
                let j = a + p * b;
                if s > best.1 || (s == best.1 && j < best.0) {
                    best = (j, s);
                }
            }
        }
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sums::{eval_weyl_sum, PhasePoint};

    #[test]
    fn rejects_non_power_of_two() {
        let p = WeylParams::new(4, 3).unwrap();
        assert!(eval_weyl_grid_x(p, 0.0, 12).is_err());
        assert!(eval_weyl_grid_t(p, 0.0, 0).is_err());
        assert!(eval_weyl_grid_t(p, 0.0, 1).is_ok());
    }

    #[test]
    fn trivial_entries() {
        let p = WeylParams::new(4, 3).unwrap();
        let g = eval_weyl_grid_x(p, 0.0, 4).unwrap();
        assert!((g[0] - Complex64::new(4.0, 0.0)).norm() < 1e-12);

        let p = WeylParams::new(1, 3).unwrap();
        let g = eval_weyl_grid_x(p, 0.5, 2).unwrap();
        for (m, v) in g.iter().enumerate() {
            assert!((v - unit(m as f64 / 2.0 + 0.5)).norm() < 1e-12);
        }

        let p = WeylParams::new(3, 3).unwrap();
        let g = eval_weyl_grid_t(p, 0.0, 8).unwrap();
        assert!((g[0] - Complex64::new(3.0, 0.0)).norm() < 1e-12);

        let p = WeylParams::new(1, 5).unwrap();
        let g = eval_weyl_grid_t(p, 0.25, 4).unwrap();
        for (m, v) in g.iter().enumerate() {
            assert!((v - unit(0.25 + m as f64 / 4.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn grids_match_direct_with_wraparound() {
        // N > M forces index folding in both evaluators
        let p = WeylParams::new(37, 4).unwrap();
        let m = 16;
        let gx = eval_weyl_grid_x(p, 0.123, m).unwrap();
        let gt = eval_weyl_grid_t(p, 0.456, m).unwrap();
        for i in 0..m {
            let s = i as f64 / m as f64;
            let dx = eval_weyl_sum(p, &PhasePoint::new(s, 0.123));
            let dt = eval_weyl_sum(p, &PhasePoint::new(0.456, s));
            assert!((gx[i] - dx).norm() < 1e-8 * 37.0);
            assert!((gt[i] - dt).norm() < 1e-8 * 37.0);
        }
    }

    #[test]
    fn scan_agrees_with_full_grid() {
        for (n, k, m, x) in [
            (9u64, 3u32, 1usize << 12, 0.3),
            (20, 3, 1 << 15, 0.41),
            (7, 4, 1 << 14, 0.77),
        ] {
            let p = WeylParams::new(n, k).unwrap();
            let g = eval_weyl_grid_t(p, x, m).unwrap();
            let mut best = (0usize, f64::NEG_INFINITY);
            for (j, v) in g.iter().enumerate() {
                if v.norm_sqr() > best.1 {
                    best = (j, v.norm_sqr());
                }
            }
            let (j, s) = TGridScan::new(p, m).unwrap().argmax(x);
            assert!((s.sqrt() - best.1.sqrt()).abs() < 1e-9 * n as f64);
            assert!((g[j].norm() - best.1.sqrt()).abs() < 1e-9 * n as f64);
        }
    }
}
