use serde::{Deserialize, Serialize};

use super::exponent_d;
use crate::error::{Error, Result};
use crate::nt::{decompose_modulus, dirichlet_approx, gcd, ModulusDecomposition, Rational};
use crate::sums::{eval_weyl_sum, PhasePoint, WeylParams};

/// Rectangle around `(r₁/q, r_k/q)` with the coarse radii and, for `k ≥ 3`,
/// the radii refined by the power-class split of `q`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MajorArc {
    pub q: u64,
    pub r1: i64,
    pub rk: i64,
    pub x_radius: f64,
    pub t_radius: f64,
    pub decomposition: Option<ModulusDecomposition>,
    pub refined_x_radius: Option<f64>,
    pub refined_t_radius: Option<f64>,
}

impl MajorArc {
    /// `(r₁/q, r_k/q)` in lowest terms.
    pub fn center(&self) -> (Rational, Rational) {
        let q = self.q;
        (
            Rational::new(self.r1, q).expect("q ≥ 1"),
            Rational::new(self.rk, q).expect("q ≥ 1"),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArcLocation {
    /// The arc produced by the construction, whether or not it passes.
    pub candidate: MajorArc,
    pub magnitude: f64,
    pub a: f64,
    pub eps: f64,
    /// `(N/A)^k N^ε`
    pub q_bound: f64,
    pub within_q_bound: bool,
    pub x_offset: f64,
    pub t_offset: f64,
    pub contains_x: bool,
    pub contains_t: bool,
    /// `∏_j q_j^{1/j}` and its bound `N^{1+ε}/A`.
    pub refined_product: Option<f64>,
    pub refined_bound: f64,
    pub within_refined_bound: Option<bool>,
    pub contains_x_refined: Option<bool>,
    pub contains_t_refined: Option<bool>,
    pub diagnostics: Vec<String>,
}

impl ArcLocation {
    /// The arc, or `None` when its modulus exceeds the allowed bound.
    pub fn arc(&self) -> Option<&MajorArc> {
        self.within_q_bound.then_some(&self.candidate)
    }
}

fn centered(v: f64) -> f64 {
    v - v.round()
}

/// Rational approximation of a point where `|ω_{N,k}|` is large.
///
/// `t` is approximated by `a/q₀` with `q₀ ≤ A^k N^{-ε}`; then `q₀x` by `b/q₁`
/// with `q₁ ≤ 2k²`. The arc has `q = q₀q₁`, `r₁ = b`, `r_k = a·q₁`, and its
/// radii are checked at exponent `ε = eps`.
pub fn locate_major_arc(params: WeylParams, pt: &PhasePoint, a: f64, eps: f64) -> Result<ArcLocation> {
    let n = params.n() as f64;
    let k = params.k();
    let kf = k as f64;
    if !(a > 0.0) || !(eps >= 0.0) {
        return Err(Error::invalid("A must be positive and ε non-negative"));
    }
    let floor = n.powf(1.0 - 1.0 / exponent_d(k) as f64);
    if a <= floor {
        return Err(Error::invalid(format!("A = {a} must exceed N^(1-1/D) = {floor}")));
    }
    let magnitude = eval_weyl_sum(params, pt).norm();
    if magnitude < a * (1.0 - 1e-12) {
        return Err(Error::invalid(format!("|ω(x,t)| = {magnitude} is below A = {a}")));
    }

    let n_eps = n.powf(eps);
    let m_t = a.powf(kf) / n_eps;
    let t_approx = match pt.exact_t {
        Some(r) if r.den() as f64 <= m_t => r,
        _ => dirichlet_approx(pt.t, m_t),
    };
    let q0 = t_approx.den();
    let x_approx = dirichlet_approx(q0 as f64 * pt.x, 2.0 * kf * kf);
    let q1 = x_approx.den();
    let q = q0 * q1;
    let r1 = x_approx.num().rem_euclid(q as i64);
    let rk = (t_approx.num() as i128 * q1 as i128).rem_euclid(q as i128) as i64;
    debug_assert_eq!(gcd(gcd(q, r1 as u64), rk as u64), 1);

    let ratio_k = (n / a).powf(kf);
    let q_bound = ratio_k * n_eps;
    let qf = q as f64;
    let x_radius = ratio_k * n.powf(-1.0 + eps) / qf;
    let t_radius = ratio_k * n.powf(-kf + eps) / qf;

    let x_offset = centered(pt.x - r1 as f64 / qf);
    let t_offset = match pt.exact_t {
        Some(t) => {
            let num = t.num() as i128 * q as i128 - rk as i128 * t.den() as i128;
            let den = t.den() as i128 * q as i128;
            let r = num.rem_euclid(den);
            let r = if 2 * r > den { r - den } else { r };
            r as f64 / den as f64
        }
        None => centered(pt.t - rk as f64 / qf),
    };

    let decomposition = if k >= 3 { Some(decompose_modulus(q, k)?) } else { None };
    let refined_bound = n.powf(1.0 + eps) / a;
    let refined_product = decomposition.as_ref().map(|d| d.weighted_product(|j| 1.0 / j as f64));
    let shrink = decomposition.as_ref().map(|d| d.weighted_product(|j| -kf / j as f64));
    let refined_x_radius = shrink.map(|s| ratio_k * n.powf(-1.0 + eps) * s);
    let refined_t_radius = shrink.map(|s| ratio_k * n.powf(-kf + eps) * s);

    let within_q_bound = qf <= q_bound;
    let contains_x = x_offset.abs() <= x_radius;
    let contains_t = t_offset.abs() <= t_radius;
    let within_refined_bound = refined_product.map(|v| v <= refined_bound);
    let contains_x_refined = refined_x_radius.map(|r| x_offset.abs() <= r);
    let contains_t_refined = refined_t_radius.map(|r| t_offset.abs() <= r);

    let mut diagnostics = Vec::new();
    if !within_q_bound {
        diagnostics.push(format!("q = {q} exceeds (N/A)^k N^ε = {q_bound:.6e}"));
    }
    if !contains_x {
        diagnostics.push(format!("|x − r₁/q| = {:.3e} > {x_radius:.3e}", x_offset.abs()));
    }
    if !contains_t {
        diagnostics.push(format!("|t − r_k/q| = {:.3e} > {t_radius:.3e}", t_offset.abs()));
    }
    if within_refined_bound == Some(false) {
        diagnostics.push(format!(
            "∏ q_j^(1/j) = {:.6e} exceeds N^(1+ε)/A = {refined_bound:.6e}",
            refined_product.unwrap_or(f64::NAN)
        ));
    }

    Ok(ArcLocation {
        candidate: MajorArc {
            q,
            r1,
            rk,
            x_radius,
            t_radius,
            decomposition,
            refined_x_radius,
            refined_t_radius,
        },
        magnitude,
        a,
        eps,
        q_bound,
        within_q_bound,
        x_offset,
        t_offset,
        contains_x,
        contains_t,
        refined_product,
        refined_bound,
        within_refined_bound,
        contains_x_refined,
        contains_t_refined,
        diagnostics,
    })
}
