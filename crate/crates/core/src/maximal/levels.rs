use serde::{Deserialize, Serialize};

use super::profile::{MaximalProfile, ProfileOptions, XGrid};
use super::SupOptions;
use crate::error::{Error, Result};
use crate::par::{pairwise_sum, Exec};
use crate::sums::WeylParams;

/// Relative change allowed between the `X`- and `2X`-point norms.
pub const NORM_CONVERGENCE_TOLERANCE: f64 = 0.02;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LpNormOptions {
    pub x_grid: u64,
    pub sup: SupOptions,
    /// Inject `r/q`, `q ≤ √N`, into the x grid.
    pub farey: bool,
    pub exec: Exec,
}

impl LpNormOptions {
    /// `8N` uniform nodes plus Farey points, oversample 8.
    pub fn for_params(params: WeylParams) -> Self {
        LpNormOptions {
            x_grid: 8 * params.n(),
            sup: SupOptions::default(),
            farey: true,
            exec: Exec::default(),
        }
    }

    fn grid(&self, params: WeylParams, points: u64) -> Result<XGrid> {
        if self.farey {
            XGrid::farey_augmented(points, (params.n() as f64).sqrt().floor() as u64)
        } else {
            XGrid::uniform(points)
        }
    }

    fn profile_options(&self) -> ProfileOptions {
        ProfileOptions {
            sup: self.sup,
            exec: self.exec,
            use_symmetry: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LpNorm {
    pub p: f64,
    pub value: f64,
    /// Same quantity with the x grid doubled.
    pub value_doubled: f64,
    pub relative_change: f64,
    pub converged: bool,
    pub nodes: usize,
}

/// `(Σ_i w_i F(x_i)^p)^{1/p}` with fixed-order pairwise summation.
pub fn lp_norm_from_profile(profile: &MaximalProfile, p: f64) -> f64 {
    let terms: Vec<f64> = profile
        .values
        .iter()
        .zip(&profile.grid.weights)
        .map(|(v, w)| w * v.value.powf(p))
        .collect();
    pairwise_sum(&terms).powf(1.0 / p)
}

/// `‖sup_t |ω_{N,k}(·,t)|‖_{L^p(T)}` on the configured grid, plus the same
/// norm on the doubled grid as a convergence check.
pub fn lp_norm_max(params: WeylParams, p: f64, opts: &LpNormOptions) -> Result<LpNorm> {
    let mut out = lp_norms_max(params, &[p], opts)?;
    Ok(out.pop().expect("one norm"))
}

/// Several exponents from one pair of profiles.
pub fn lp_norms_max(params: WeylParams, ps: &[f64], opts: &LpNormOptions) -> Result<Vec<LpNorm>> {
    if let Some(&p) = ps.iter().find(|&&p| !(p >= 1.0)) {
        return Err(Error::invalid(format!("p must be ≥ 1, got {p}")));
    }
    if opts.x_grid < 4 * params.n() {
        return Err(Error::invalid(format!(
            "x grid {} is below 4N = {}",
            opts.x_grid,
            4 * params.n()
        )));
    }
    let grids = vec![opts.grid(params, opts.x_grid)?, opts.grid(params, 2 * opts.x_grid)?];
    let profiles = MaximalProfile::compute_many(params, grids, &opts.profile_options())?;
    Ok(ps
        .iter()
        .map(|&p| {
            let value = lp_norm_from_profile(&profiles[0], p);
            let value_doubled = lp_norm_from_profile(&profiles[1], p);
            let relative_change = (value_doubled - value).abs() / value_doubled;
            LpNorm {
                p,
                value,
                value_doubled,
                relative_change,
                converged: relative_change < NORM_CONVERGENCE_TOLERANCE,
                nodes: profiles[0].grid.len(),
            }
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LevelSetReport {
    pub a: f64,
    /// `|{x : F(x) > A}|` estimated on the grid.
    pub measure: f64,
    /// `N^k A^{-(k+1)}`
    pub level_bound: f64,
    pub ratio: f64,
}

pub fn superlevel_from_profile(profile: &MaximalProfile, a: f64) -> LevelSetReport {
    let terms: Vec<f64> = profile
        .values
        .iter()
        .zip(&profile.grid.weights)
        .map(|(v, &w)| if v.value > a { w } else { 0.0 })
        .collect();
    let measure = pairwise_sum(&terms).clamp(0.0, 1.0);
    let n = profile.params.n() as f64;
    let k = profile.params.k() as i32;
    let level_bound = n.powi(k) * a.powi(-(k + 1));
    LevelSetReport {
        a,
        measure,
        level_bound,
        ratio: measure / level_bound,
    }
}

/// Fraction of the uniform `x_grid` nodes where `F > A`.
pub fn superlevel_measure(params: WeylParams, a: f64, x_grid: u64, opts: &ProfileOptions) -> Result<LevelSetReport> {
    if !(a > 0.0) {
        return Err(Error::invalid(format!("level A must be positive, got {a}")));
    }
    let profile = MaximalProfile::compute(params, XGrid::uniform(x_grid)?, opts)?;
    Ok(superlevel_from_profile(&profile, a))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn norm_between_trivial_bounds() {
        let p = WeylParams::new(16, 3).unwrap();
        let opts = LpNormOptions::for_params(p);
        for exp in [1.0, 2.0, 8.0] {
            let r = lp_norm_max(p, exp, &opts).unwrap();
            assert!(r.value <= 16.0 + 1e-9);
            assert!(r.value >= 0.01 * 16f64.powf(1.0 - 1.0 / exp));
        }
    }

    #[test]
    fn grid_precondition() {
        let p = WeylParams::new(16, 3).unwrap();
        let mut opts = LpNormOptions::for_params(p);
        opts.x_grid = 63;
        assert!(lp_norm_max(p, 2.0, &opts).is_err());
        opts.x_grid = 64;
        assert!(lp_norm_max(p, 0.5, &opts).is_err());
    }

    #[test]
    fn superlevel_edges() {
        let p = WeylParams::new(16, 3).unwrap();
        let opts = ProfileOptions::default();
        assert_eq!(superlevel_measure(p, 17.0, 64, &opts).unwrap().measure, 0.0);
        let r = superlevel_measure(p, 16.0 * (1.0 - 1e-9), 64, &opts).unwrap();
        assert!(r.measure >= 1.0 / 64.0);
        assert!(superlevel_measure(p, 0.0, 64, &opts).is_err());
    }

    #[test]
    fn superlevel_nonincreasing() {
        let p = WeylParams::new(24, 3).unwrap();
        let profile = MaximalProfile::compute(p, XGrid::uniform(192).unwrap(), &ProfileOptions::default()).unwrap();
        let mut last = f64::INFINITY;
        for j in 0..=40 {
            let a = 24.0 * j as f64 / 40.0 + 1e-9;
            let m = superlevel_from_profile(&profile, a).measure;
            assert!((0.0..=1.0).contains(&m));
            assert!(m <= last);
            last = m;
        }
    }
}
