use serde::{Deserialize, Serialize};

use super::{eval_gauss_sum, eval_weyl_sum, ComplexValue, PhasePoint, WeylParams};
use crate::error::{Error, Result};
use crate::nt::gcd;
use crate::quadrature::eval_oscillatory_integral;

/// Rational center `(r₁/q, r_k/q)` of a major arc.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArcCenter {
    pub q: u64,
    pub r1: i64,
    pub rk: i64,
}

impl ArcCenter {
    pub fn new(q: u64, r1: i64, rk: i64) -> Result<Self> {
        let g = gcd(gcd(q, r1.unsigned_abs()), rk.unsigned_abs());
        if q == 0 || g != 1 {
            return Err(Error::InvalidCenter { q, r1, rk });
        }
        Ok(ArcCenter { q, r1, rk })
    }
}

/// `ω = q⁻¹·S_k(r/q; q)·I(ξ) + Δ` at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MajorArcDecomposition {
    pub main_term: ComplexValue,
    pub delta: ComplexValue,
    pub delta_bound: f64,
    pub exact: ComplexValue,
    pub xi1: f64,
    pub xik: f64,
    pub gauss: ComplexValue,
    pub integral: ComplexValue,
}

impl MajorArcDecomposition {
    /// `|Δ| / delta_bound`: the implied constant at this point.
    pub fn constant(&self) -> f64 {
        self.delta.norm() / self.delta_bound
    }
}

fn centered(v: f64) -> f64 {
    v - v.round()
}

/// Splits `ω_{N,k}(x,t)` into the major-arc main term around `center` and the
/// remainder `Δ = exact − main`. Offsets `ξ₁ = x − r₁/q`, `ξ_k = t − r_k/q`
/// are taken modulo 1 into `[-1/2, 1/2]`, which is harmless because the
/// complete sum only sees `r₁, r_k mod q`.
pub fn major_arc_decompose(params: WeylParams, pt: &PhasePoint, center: ArcCenter) -> Result<MajorArcDecomposition> {
    let ArcCenter { q, r1, rk } = ArcCenter::new(center.q, center.r1, center.rk)?;
    let n = params.n();
    let k = params.k();

    let xi1 = centered(pt.x - r1 as f64 / q as f64);
    let xik = match pt.exact_t {
        Some(t) => {
            let num = t.num() as i128 * q as i128 - rk as i128 * t.den() as i128;
            let den = t.den() as i128 * q as i128;
            let r = num.rem_euclid(den);
            let r = if 2 * r > den { r - den } else { r };
            r as f64 / den as f64
        }
        None => centered(pt.t - rk as f64 / q as f64),
    };

    let gauss = eval_gauss_sum(k, rk, r1, q);
    let mut xi = vec![0.0; k as usize];
    xi[0] = xi1;
    xi[k as usize - 1] = xik;
    let integral = eval_oscillatory_integral(&xi, n, 1e-10 * n as f64)?;

    let exact = eval_weyl_sum(params, pt);
    let main_term = gauss * integral / q as f64;
    let delta = exact - main_term;
    let nf = n as f64;
    let delta_bound = q as f64 * (1.0 + xi1.abs() * nf + xik.abs() * nf.powi(k as i32));
    Ok(MajorArcDecomposition {
        main_term,
        delta,
        delta_bound,
        exact,
        xi1,
        xik,
        gauss,
        integral,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nt::Rational;
    use num_complex::Complex64;

    #[test]
    fn origin_center_is_exact() {
        for (n, k) in [(10u64, 3u32), (64, 4), (7, 5)] {
            let p = WeylParams::new(n, k).unwrap();
            let d = major_arc_decompose(p, &PhasePoint::new(0.0, 0.0), ArcCenter::new(1, 0, 0).unwrap()).unwrap();
            assert!((d.main_term - Complex64::new(n as f64, 0.0)).norm() < 1e-9 * n as f64);
            assert!(d.delta.norm() < 1e-9 * n as f64);
            assert_eq!(d.delta_bound, 1.0);
        }
    }

    #[test]
    fn gcd_violation() {
        assert!(matches!(ArcCenter::new(6, 2, 4), Err(Error::InvalidCenter { .. })));
        assert!(ArcCenter::new(6, 2, 3).is_ok());
        assert!(ArcCenter::new(0, 1, 1).is_err());
    }

    #[test]
    fn identity_holds() {
        let p = WeylParams::new(50, 3).unwrap();
        let pt = PhasePoint::new(1.0 / 3.0, 1.0 / 3.0);
        let d = major_arc_decompose(p, &pt, ArcCenter::new(3, 1, 1).unwrap()).unwrap();
        assert!((d.main_term + d.delta - d.exact).norm() < 1e-12 * 50.0);
        assert!(d.delta.norm() <= 50.0 * d.delta_bound);
    }

    #[test]
    fn exact_t_offset_wraps() {
        let p = WeylParams::new(20, 3).unwrap();
        let pt = PhasePoint::with_exact_t(0.0, Rational::new(6, 7).unwrap());
        let d = major_arc_decompose(p, &pt, ArcCenter::new(7, 0, -1).unwrap()).unwrap();
        assert_eq!(d.xik, 0.0);
    }
}
