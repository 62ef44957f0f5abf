mod common;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use weyl_core::maximal::*;
use weyl_core::nt::gcd;
use weyl_core::sums::{eval_weyl_sum, PhasePoint, WeylParams};
use weyl_core::{Error, Exec, Rational};

#[test]
fn sup_trivial_cases() {
    for (n, k) in [(10u64, 3u32), (7, 4)] {
        let p = WeylParams::new(n, k).unwrap();
        let v = sup_over_t(p, 0.0, 4).unwrap();
        assert!((v.value - n as f64).abs() < 1e-9);
        assert!(v.t_star.abs() < 1e-12);
    }
    let v = sup_over_t(WeylParams::new(1, 3).unwrap(), 0.77, 4).unwrap();
    assert!((v.value - 1.0).abs() < 1e-12);
}

#[test]
fn sup_matches_dense_brute_force() {
    // frozen: max of |ω(0.41, j/2^24)| by direct summation over all 2^24 nodes
    let frozen = 22.011400654658246;
    let p = WeylParams::new(32, 3).unwrap();
    let v = sup_over_t(p, 0.41, 8).unwrap();
    assert!((v.value - frozen).abs() < 1e-4 * 32.0, "{v:?}");
    let o = common::weyl_sum(32, 3, 0.41, v.t_star).norm();
    assert!((v.value - o).abs() <= 1e-6 * 32.0);
}

#[test]
fn sup_dominates_probes() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let p = WeylParams::new(24, 3).unwrap();
    for _ in 0..5 {
        let x: f64 = rng.random();
        let v = sup_over_t(p, x, 8).unwrap();
        for _ in 0..100 {
            let t: f64 = rng.random();
            let w = eval_weyl_sum(p, &PhasePoint::new(x, t)).norm();
            assert!(w <= v.value + 1e-6 * 24.0, "x={x} t={t}: {w} > {}", v.value);
        }
    }
}

#[test]
fn budget_error_names_requirement() {
    let p = WeylParams::new(128, 3).unwrap();
    let opts = SupOptions {
        oversample: 8,
        budget: 1 << 20,
    };
    match sup_over_t_with(p, 0.2, &opts) {
        Err(Error::Budget { required, .. }) => assert_eq!(required, 8 << 21),
        other => panic!("{other:?}"),
    }
}

#[test]
fn lp_norm_against_uniform_brute_force() {
    // frozen: 1024-point uniform grid, sup over the 2^21-point t grid
    let frozen_p2 = 46.40918344671917;
    let frozen_p8 = 50.27654660052957;
    let p = WeylParams::new(64, 3).unwrap();
    let opts = LpNormOptions::for_params(p);
    let norms = lp_norms_max(p, &[2.0, 8.0], &opts).unwrap();
    assert!(norms.iter().all(|n| n.converged));
    assert!((norms[0].value - frozen_p2).abs() / frozen_p2 < 0.02, "{:?}", norms[0]);
    assert!((norms[1].value - frozen_p8).abs() / frozen_p8 < 0.02, "{:?}", norms[1]);

    let plain = LpNormOptions {
        x_grid: 512,
        farey: false,
        ..opts
    };
    let v = lp_norm_max(p, 2.0, &plain).unwrap();
    // the oracle keeps the raw grid maximum; refinement can only raise it
    assert!(v.value_doubled >= frozen_p2 - 1e-9, "{v:?}");
    assert!((v.value_doubled - frozen_p2) / frozen_p2 < 5e-3, "{v:?}");
    for n in &norms {
        assert!(n.value <= 64.0);
        assert!(n.value >= 0.01 * 64f64.powf(1.0 - 1.0 / n.p));
    }
}

#[test]
fn lp_norm_rejects_coarse_grid() {
    let p = WeylParams::new(16, 3).unwrap();
    let opts = LpNormOptions {
        x_grid: 32,
        ..LpNormOptions::for_params(p)
    };
    assert!(lp_norm_max(p, 2.0, &opts).is_err());
}

#[test]
fn superlevel_examples() {
    let p = WeylParams::new(32, 3).unwrap();
    let opts = ProfileOptions::default();
    let r = superlevel_measure(p, 33.0, 128, &opts).unwrap();
    assert_eq!(r.measure, 0.0);
    let r = superlevel_measure(p, 32.0 * (1.0 - 1e-9), 128, &opts).unwrap();
    assert!(r.measure >= 1.0 / 128.0);
    assert!((r.ratio - r.measure / r.level_bound).abs() < 1e-15);
}

#[test]
fn superlevel_nonincreasing() {
    let p = WeylParams::new(48, 3).unwrap();
    let profile = MaximalProfile::compute(p, XGrid::uniform(384).unwrap(), &ProfileOptions::default()).unwrap();
    let mut prev = 1.0;
    for e in [0.6, 0.7, 0.8, 0.9, 0.95] {
        let r = superlevel_from_profile(&profile, 48f64.powf(e));
        assert!(r.measure <= prev);
        prev = r.measure;
    }
}

#[test]
fn layer_cake_uniform_closed_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let xs: Vec<f64> = (0..10_000).map(|_| rng.random()).collect();
    let r = layer_cake_integral(&xs, 2.0, 0.5, 1.0, 1.0, 2.0).unwrap();
    assert!((r.direct - 1.0 / 3.0).abs() < 0.02 / 3.0, "{}", r.direct);
    assert!(r.direct <= r.reconstructed * (1.0 + 1e-6));
    assert!(r.reconstructed <= 4.0 * r.direct + 0.25);
}

#[test]
fn exponent_predictions() {
    let e = predicted_exponents(3, 2.0);
    assert_eq!((e.upper, e.lower), (0.75, 0.75));
    let e = predicted_exponents(3, 8.0);
    assert_eq!((e.upper, e.lower), (0.875, 0.875));
    let e = predicted_exponents(4, 2.0);
    assert_eq!((e.upper, e.lower), (0.875, 0.75));
}

#[test]
fn small_exponent_fit_runs() {
    let f = exponent_fit(3, 2.0, &[8, 12, 16], &FitOptions::default()).unwrap();
    assert_eq!(f.n_values.len(), f.norm_values.len());
    assert!(f.fitted_slope > 0.3 && f.fitted_slope < 1.0, "{f:?}");
    assert_eq!(f.predicted_upper, 0.75);
}

#[test]
fn conjecture_examples() {
    let p = WeylParams::new(16, 3).unwrap();
    let s = conjecture_ratio(p, &PhasePoint::new(0.0, 0.0));
    assert!(s.ratio <= 1.0);
    // Σ e(n³/2) = Σ (−1)^n vanishes for even N
    let s = conjecture_ratio(p, &PhasePoint::with_exact_t(0.0, Rational::new(1, 2).unwrap()));
    assert_eq!(s.q, 2);
    assert!(s.ratio < 1e-12);
}

#[test]
fn locate_origin() {
    let p = WeylParams::new(100, 3).unwrap();
    let loc = locate_major_arc(p, &PhasePoint::new(0.0, 0.0), 50.0, 0.05).unwrap();
    let arc = loc.arc().unwrap();
    assert_eq!((arc.q, arc.r1, arc.rk), (1, 0, 0));
    assert!(loc.contains_x && loc.contains_t);
}

#[test]
fn locate_rejects_vanishing_point() {
    // 27 complete periods of Σ e(2n/3)
    let p = WeylParams::new(81, 3).unwrap();
    let pt = PhasePoint::with_exact_t(1.0 / 3.0, Rational::new(1, 3).unwrap());
    assert!(eval_weyl_sum(p, &pt).norm() < 1e-9);
    assert!(locate_major_arc(p, &pt, 30.0, 0.05).is_err());
}

#[test]
fn planted_arc_recovery() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut trials, mut hits) = (0, 0);
    while trials < 1000 {
        let k = rng.random_range(3..=4u32);
        let n = rng.random_range(256..=1024u64);
        let qmax = (n as f64).powf(0.25) as u64;
        let q = rng.random_range(1..=qmax);
        let (r1, rk) = (rng.random_range(0..q) as i64, rng.random_range(0..q) as i64);
        if gcd(gcd(q, r1 as u64), rk as u64) != 1 {
            continue;
        }
        let nf = n as f64;
        let x = r1 as f64 / q as f64 + rng.random_range(-0.01..0.01) / nf;
        let t = rk as f64 / q as f64 + rng.random_range(-0.01..0.01) / nf.powi(k as i32);
        let p = WeylParams::new(n, k).unwrap();
        let pt = PhasePoint::new(x, t);
        let a = eval_weyl_sum(p, &pt).norm() * (1.0 - 1e-9);
        if a <= nf.powf(1.0 - 1.0 / exponent_d(k) as f64) {
            continue;
        }
        trials += 1;
        let loc = locate_major_arc(p, &pt, a, 0.05).unwrap();
        let planted = (Rational::new(r1, q).unwrap(), Rational::new(rk, q).unwrap());
        if loc.candidate.center() == planted {
            hits += 1;
        }
    }
    assert!(hits >= 990, "{hits}/1000");
}

#[test]
fn profiles_identical_across_exec_modes() {
    let p = WeylParams::new(20, 3).unwrap();
    let grid = XGrid::farey_augmented(80, 4).unwrap();
    let seq = ProfileOptions {
        exec: Exec::Sequential,
        ..Default::default()
    };
    let par = ProfileOptions {
        exec: Exec::Parallel,
        ..Default::default()
    };
    let a = MaximalProfile::compute(p, grid.clone(), &seq).unwrap();
    let b = MaximalProfile::compute(p, grid, &par).unwrap();
    assert_eq!(a, b);
}
