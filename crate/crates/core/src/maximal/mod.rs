//! The maximal function `F(x) = sup_{0<t<1} |ω_{N,k}(x,t)|` and everything
//! measured from it.

mod fit;
mod layer_cake;
mod levels;
mod locate;
mod profile;

pub use fit::{
    conjecture_ratio, conjecture_scan, exponent_fit, exponent_fits, least_squares_slope, predicted_exponents,
    ConjectureSample, ConjectureScan, ExponentFit, FitOptions, PredictedExponents,
};
pub use layer_cake::{layer_cake_integral, LayerCake};
pub use levels::{
    lp_norm_from_profile, lp_norm_max, lp_norms_max, superlevel_from_profile, superlevel_measure, LevelSetReport,
    LpNorm, LpNormOptions, NORM_CONVERGENCE_TOLERANCE,
};
pub use locate::{locate_major_arc, ArcLocation, MajorArc};
pub use profile::{canonical_node, MaximalProfile, ProfileOptions, XGrid};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sums::{eval_weyl_sum, PhasePoint, TGridScan, WeylParams};

/// Default cap on `oversample·N^k` per sup call.
pub const DEFAULT_BUDGET: u64 = 1 << 27;
pub const DEFAULT_OVERSAMPLE: u32 = 8;
pub const MIN_OVERSAMPLE: u32 = 4;

/// `D = min{2^{k-1}, k(k-1)}`.
pub fn exponent_d(k: u32) -> u64 {
    let k = k as u64;
    (1u64 << (k - 1).min(63)).min(k * (k - 1))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaximalValue {
    pub value: f64,
    pub t_star: f64,
    pub grid_size: usize,
    pub refined: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupOptions {
    pub oversample: u32,
    pub budget: u64,
}

impl Default for SupOptions {
    fn default() -> Self {
        SupOptions {
            oversample: DEFAULT_OVERSAMPLE,
            budget: DEFAULT_BUDGET,
        }
    }
}

/// Smallest power of two `≥ oversample·N^k`, after checking the budget.
pub fn t_grid_size(params: WeylParams, opts: &SupOptions) -> Result<usize> {
    if opts.oversample < MIN_OVERSAMPLE {
        return Err(Error::invalid(format!(
            "oversample must be ≥ {MIN_OVERSAMPLE}, got {}",
            opts.oversample
        )));
    }
    let required = params.top_frequency().saturating_mul(opts.oversample as u128);
    if required > opts.budget as u128 {
        return Err(Error::Budget {
            required: required.min(u64::MAX as u128) as u64,
            budget: opts.budget,
        });
    }
    Ok((required as u64).next_power_of_two() as usize)
}

/// Grid maximum of `|ω(x, ·)|`, then one parabolic step on `|ω|²` through
/// the neighbouring samples. The reported value is always a direct
/// evaluation at `t_star`; the refined abscissa is kept only if it improves
/// on the grid point.
pub fn sup_over_t(params: WeylParams, x: f64, oversample: u32) -> Result<MaximalValue> {
    sup_over_t_with(
        params,
        x,
        &SupOptions {
            oversample,
            ..SupOptions::default()
        },
    )
}

pub fn sup_over_t_with(params: WeylParams, x: f64, opts: &SupOptions) -> Result<MaximalValue> {
    let m = t_grid_size(params, opts)?;
    let mut scan = TGridScan::new(params, m)?;
    Ok(sup_with_scan(&mut scan, x))
}

pub(crate) fn sup_with_scan(scan: &mut TGridScan, x: f64) -> MaximalValue {
    let params = scan.params();
    let m = scan.len();
    // first index wins ties, so the smallest t is reported
    let (best, _) = scan.argmax(x);

    let step = 1.0 / m as f64;
    let at = |j: usize| eval_weyl_sum(params, &PhasePoint::new(x, j as f64 * step)).norm();
    let t_grid = best as f64 * step;
    let grid_value = at(best);

    let mut result = MaximalValue {
        value: grid_value,
        t_star: t_grid,
        grid_size: m,
        refined: false,
    };
    if m >= 3 {
        let y0 = grid_value * grid_value;
        let ym = at((best + m - 1) % m).powi(2);
        let yp = at((best + 1) % m).powi(2);
        let curvature = ym - 2.0 * y0 + yp;
        if curvature < 0.0 {
            let offset = (0.5 * (ym - yp) / curvature).clamp(-0.5, 0.5);
            let t_ref = (t_grid + offset * step).rem_euclid(1.0) % 1.0;
            let v = eval_weyl_sum(params, &PhasePoint::new(x, t_ref)).norm();
            if v > grid_value {
                result.value = v;
                result.t_star = t_ref;
                result.refined = true;
            }
        }
    }
    result
}
