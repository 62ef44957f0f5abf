//! Adaptive Gauss–Kronrod quadrature for `I(ξ) = ∫₀^N e(ξ₁z + ξ₂z² + ⋯ + ξ_k z^k) dz`.
//!
//! The initial partition is driven by the phase derivative: every panel
//! spans at most 1/8 of an oscillation, so the 15-point Kronrod rule is
//! already near machine precision on each piece. Panels whose Kronrod/Gauss
//! discrepancy dominates the error budget are bisected until the summed
//! estimate falls below `tol`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::phase::unit;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_56,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_89,
    0.209_482_141_084_727_82,
];

// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7]
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_64,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Largest phase change (in turns) allowed across one initial panel.
pub const MAX_TURNS_PER_PANEL: f64 = 0.125;

pub const DEFAULT_MAX_PANELS: usize = 1 << 21;

/// Polynomial phase `P(z) = Σ_j ξ_j z^j` (no constant term).
#[derive(Debug, Clone)]
struct Phase<'a> {
    xi: &'a [f64],
}

impl Phase<'_> {
    fn value(&self, z: f64) -> f64 {
        self.xi.iter().rev().fold(0.0, |acc, &c| (acc + c) * z)
    }

    /// Upper bound for `|P'|` on `[0, b]`.
    fn slope_bound(&self, b: f64) -> f64 {
        self.xi
            .iter()
            .enumerate()
            .map(|(j, &c)| (j + 1) as f64 * c.abs() * b.powi(j as i32))
            .sum()
    }
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    // largest error first; ties broken by position so the heap order is total
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

fn gauss_kronrod(phase: &Phase, a: f64, b: f64) -> Panel {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f = |z: f64| unit(phase.value(z));
    let center = f(mid);
    let mut kronrod = center * WGK[7];
    let mut gauss = center * WG[3];
    for j in 0..7 {
        let pair = f(mid - half * XGK[j]) + f(mid + half * XGK[j]);
        kronrod += pair * WGK[j];
        if j % 2 == 1 {
            gauss += pair * WG[j / 2];
        }
    }
    let value = kronrod * half;
    let error = ((kronrod - gauss) * half).norm();
    Panel { a, b, value, error }
}

fn initial_partition(phase: &Phase, n: f64) -> Vec<(f64, f64)> {
    let mut panels = Vec::new();
    let mut z = 0.0;
    while z < n {
        let mut h = n - z;
        while h * phase.slope_bound(z + h) > MAX_TURNS_PER_PANEL && h > n * f64::EPSILON {
            h *= 0.5;
        }
        let end = if z + h >= n { n } else { z + h };
        panels.push((z, end));
        z = end;
    }
    panels
}

/// `∫₀^N e(ξ₁z + ⋯ + ξ_k z^k) dz` to absolute accuracy `tol`.
pub fn eval_oscillatory_integral(xi: &[f64], n: u64, tol: f64) -> Result<Complex64> {
    eval_oscillatory_integral_with(xi, n, tol, DEFAULT_MAX_PANELS)
}

pub fn eval_oscillatory_integral_with(xi: &[f64], n: u64, tol: f64, max_panels: usize) -> Result<Complex64> {
    if !(tol > 0.0) {
        return Err(Error::invalid("tolerance must be positive"));
    }
    if n == 0 {
        return Err(Error::invalid("upper limit N must be ≥ 1"));
    }
    if xi.iter().any(|c| !c.is_finite()) {
        return Err(Error::invalid("non-finite phase coefficient"));
    }
    let phase = Phase { xi };
    let n = n as f64;
    let partition = initial_partition(&phase, n);
    if partition.len() > max_panels {
        return Err(Error::Quadrature {
            achieved: f64::INFINITY,
            tol,
            panels: partition.len(),
        });
    }
    let mut heap: BinaryHeap<Panel> = partition
        .into_iter()
        .map(|(a, b)| gauss_kronrod(&phase, a, b))
        .collect();
    let mut total_error: f64 = heap.iter().map(|p| p.error).sum();
    while total_error > tol {
        if heap.len() >= max_panels {
            return Err(Error::Quadrature {
                achieved: total_error,
                tol,
                panels: heap.len(),
            });
        }
        let worst = heap.pop().expect("non-empty panel set");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            return Err(Error::Quadrature {
                achieved: total_error,
                tol,
                panels: heap.len() + 1,
            });
        }
        let left = gauss_kronrod(&phase, worst.a, mid);
        let right = gauss_kronrod(&phase, mid, worst.b);
        total_error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        // re-sum occasionally to keep the running total from drifting
        if heap.len().is_multiple_of(1024) {
            total_error = heap.iter().map(|p| p.error).sum();
        }
    }
    let mut panels = heap.into_vec();
    panels.sort_by(|p, q| p.a.total_cmp(&q.a));
    Ok(panels.iter().map(|p| p.value).sum())
}
