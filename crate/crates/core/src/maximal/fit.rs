use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::exponent_d;
use super::levels::{lp_norms_max, LpNormOptions};
use super::SupOptions;
use crate::error::{Error, Result};
use crate::nt::{dirichlet_approx, Rational};
use crate::par::{self, Exec};
use crate::sums::{eval_weyl_sum, PhasePoint, WeylParams};

/// Exponents `β` in `‖F‖_p ≈ N^β` for `F = sup_t |ω_{N,k}(·,t)|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PredictedExponents {
    pub k: u32,
    pub p: f64,
    /// `p_k = min{2^{k-1}, k(k-1)}`
    pub p_k: u64,
    /// `1/2 + s_{p,k}`
    pub upper: f64,
    /// `1/2 + γ_p`
    pub lower: f64,
    /// `1/2 + s_{p,k}` with the threshold `p_k` replaced by `k + 1`
    pub conditional: f64,
}

fn s_exponent(p: f64, threshold: f64) -> f64 {
    if p <= threshold {
        0.5 - 1.0 / threshold
    } else {
        0.5 - 1.0 / p
    }
}

pub fn predicted_exponents(k: u32, p: f64) -> PredictedExponents {
    let p_k = exponent_d(k);
    let gamma = if p <= 4.0 { 0.25 } else { 0.5 - 1.0 / p };
    PredictedExponents {
        k,
        p,
        p_k,
        upper: 0.5 + s_exponent(p, p_k as f64),
        lower: 0.5 + gamma,
        conditional: 0.5 + s_exponent(p, (k + 1) as f64),
    }
}

/// Ordinary least squares `y ≈ slope·x + intercept`.
pub fn least_squares_slope(xs: &[f64], ys: &[f64]) -> Result<(f64, f64)> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::invalid("need at least two paired points"));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(Error::invalid("abscissae are all equal"));
    }
    let slope = sxy / sxx;
    Ok((slope, my - slope * mx))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitOptions {
    /// x grid of `x_grid_factor·N` uniform nodes.
    pub x_grid_factor: u64,
    pub sup: SupOptions,
    pub farey: bool,
    pub exec: Exec,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            x_grid_factor: 8,
            sup: SupOptions::default(),
            farey: true,
            exec: Exec::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExponentFit {
    pub k: u32,
    pub p: f64,
    pub n_values: Vec<u64>,
    pub norm_values: Vec<f64>,
    /// Norms on the doubled x grid, one per `N`.
    pub norm_values_doubled: Vec<f64>,
    pub fitted_slope: f64,
    pub intercept: f64,
    pub predicted_upper: f64,
    pub predicted_lower: f64,
    pub predicted_conditional: f64,
    /// Every norm passed the grid-doubling check.
    pub converged: bool,
}

pub fn exponent_fit(k: u32, p: f64, n_values: &[u64], opts: &FitOptions) -> Result<ExponentFit> {
    let mut fits = exponent_fits(k, &[p], n_values, opts)?;
    Ok(fits.pop().expect("one fit"))
}

/// Fits for several `p`, sharing the maximal-function profiles per `N`.
pub fn exponent_fits(k: u32, ps: &[f64], n_values: &[u64], opts: &FitOptions) -> Result<Vec<ExponentFit>> {
    if n_values.len() < 3 {
        return Err(Error::invalid(format!(
            "need at least 3 values of N, got {}",
            n_values.len()
        )));
    }
    let mut sorted = n_values.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != n_values.len() {
        return Err(Error::invalid("values of N must be distinct"));
    }
    if opts.x_grid_factor < 4 {
        return Err(Error::invalid("x grid factor must be ≥ 4"));
    }
    let mut per_n = Vec::with_capacity(n_values.len());
    for &n in n_values {
        let params = WeylParams::new(n, k)?;
        let norm_opts = LpNormOptions {
            x_grid: opts.x_grid_factor * n,
            sup: opts.sup,
            farey: opts.farey,
            exec: opts.exec,
        };
        per_n.push(lp_norms_max(params, ps, &norm_opts)?);
    }
    let log_n: Vec<f64> = n_values.iter().map(|&n| (n as f64).ln()).collect();
    ps.iter()
        .enumerate()
        .map(|(i, &p)| {
            let norm_values: Vec<f64> = per_n.iter().map(|v| v[i].value).collect();
            let norm_values_doubled = per_n.iter().map(|v| v[i].value_doubled).collect();
            let log_v: Vec<f64> = norm_values.iter().map(|v| v.ln()).collect();
            let (fitted_slope, intercept) = least_squares_slope(&log_n, &log_v)?;
            let pred = predicted_exponents(k, p);
            Ok(ExponentFit {
                k,
                p,
                n_values: n_values.to_vec(),
                norm_values,
                norm_values_doubled,
                fitted_slope,
                intercept,
                predicted_upper: pred.upper,
                predicted_lower: pred.lower,
                predicted_conditional: pred.conditional,
                converged: per_n.iter().all(|v| v[i].converged),
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConjectureSample {
    pub x: f64,
    pub t: f64,
    /// Denominator of the Dirichlet approximation of `t` with `M = N^{k/2}`.
    pub q: u64,
    pub magnitude: f64,
    pub ratio: f64,
}

/// `|ω| / (N (1/q + q/N^k)^{1/k})`.
pub fn conjecture_ratio(params: WeylParams, pt: &PhasePoint) -> ConjectureSample {
    let n = params.n() as f64;
    let k = params.k() as f64;
    let q = match pt.exact_t {
        Some(r) if r.den() as f64 <= n.powf(k / 2.0) => r.den(),
        _ => dirichlet_approx(pt.t, n.powf(k / 2.0)).den(),
    };
    let qf = q as f64;
    let magnitude = eval_weyl_sum(params, pt).norm();
    let bound = n * (1.0 / qf + qf / n.powf(k)).powf(1.0 / k);
    ConjectureSample {
        x: pt.x,
        t: pt.t,
        q,
        magnitude,
        ratio: magnitude / bound,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConjectureScan {
    pub k: u32,
    pub n: u64,
    pub samples: u64,
    pub seed: u64,
    pub max_ratio: f64,
    pub mean_ratio: f64,
    pub worst: ConjectureSample,
}

/// Half the samples are uniform `(x, t)`; the other half use uniform `x` and
/// `t = a/q` with `q` uniform in `[1, N]`, evaluated with exact phases.
pub fn conjecture_scan(k: u32, n: u64, samples: u64, seed: u64, exec: Exec) -> Result<ConjectureScan> {
    if samples == 0 {
        return Err(Error::invalid("need at least one sample"));
    }
    let params = WeylParams::new(n, k)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points: Vec<PhasePoint> = (0..samples)
        .map(|i| {
            let x: f64 = rng.random();
            if i % 2 == 0 {
                PhasePoint::new(x, rng.random())
            } else {
                let q = rng.random_range(1..=n);
                let a = rng.random_range(0..q) as i64;
                PhasePoint::with_exact_t(x, Rational::new(a, q).expect("q ≥ 1"))
            }
        })
        .collect();
    let results = par::map(exec, &points, |pt| conjecture_ratio(params, pt));
    let mut worst = results[0];
    for r in &results[1..] {
        if r.ratio > worst.ratio {
            worst = *r;
        }
    }
    let ratios: Vec<f64> = results.iter().map(|r| r.ratio).collect();
    Ok(ConjectureScan {
        k,
        n,
        samples,
        seed,
        max_ratio: worst.ratio,
        mean_ratio: par::pairwise_sum(&ratios) / samples as f64,
        worst,
    })
}
