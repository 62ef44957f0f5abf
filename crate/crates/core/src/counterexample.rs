//! Lower-bound certificate for `k ≥ 3`: near `(a/q, b/q)` with `q ~ √N` prime
//! and `|S_k(b, a; q)| ≥ √q/2`, the maximal function is about `N/√q`, and the
//! intervals `J(q, a)` add up to an `L¹` mass of order `N^{3/4}`.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nt::{is_prime, primes_in, Rational};
use crate::par::{self, pairwise_sum, Exec};
use crate::sums::{eval_gauss_sum, eval_weyl_sum, CompleteSumTable, PhasePoint, WeylParams};

pub const DEFAULT_C1: f64 = 0.5;
/// Threshold `|S| ≥ α₁√q`.
pub const ALPHA1: f64 = 0.5;

/// `α₂ = k⁻²/4`.
pub fn alpha2(k: u32) -> f64 {
    0.25 / (k as f64 * k as f64)
}

/// Counts of `G(b) = {a ∈ [1, q] : |S_k(b, a; q)| ≥ √q/2}` for every
/// `b ∈ [1, q]`, where `b` multiplies `n^k` and `a` multiplies `n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoodSetCensus {
    pub k: u32,
    pub q: u64,
    pub alpha1: f64,
    /// `counts_per_b[b - 1] = #G(b)`
    pub counts_per_b: Vec<u64>,
    /// `#A(q)`
    pub total: u64,
    /// Smallest `b` with the largest count.
    pub best_b: u64,
    /// `G(best_b)` in increasing order.
    pub best_good_set: Vec<u64>,
}

impl GoodSetCensus {
    pub fn best_count(&self) -> u64 {
        self.counts_per_b[(self.best_b - 1) as usize]
    }
}

fn good_set(table: &CompleteSumTable, b: u64, threshold: f64) -> Vec<u64> {
    let q = table.modulus();
    (1..=q)
        .filter(|&a| table.sum(b as i64, a as i64).norm() >= threshold)
        .collect()
}

pub fn good_set_census(k: u32, q: u64) -> Result<GoodSetCensus> {
    good_set_census_with(k, q, Exec::default())
}

pub fn good_set_census_with(k: u32, q: u64, exec: Exec) -> Result<GoodSetCensus> {
    if q < 3 || !is_prime(q) {
        return Err(Error::invalid(format!("q = {q} must be a prime ≥ 3")));
    }
    if k < 2 {
        return Err(Error::invalid("k must be ≥ 2"));
    }
    if (k as u64).is_multiple_of(q) {
        return Err(Error::invalid(format!("q = {q} divides k = {k}")));
    }
    let table = CompleteSumTable::new(k, q);
    // the sums are exact up to round-off of order 1e-10·q
    let threshold = ALPHA1 * (q as f64).sqrt() - 1e-10 * q as f64;
    let bs: Vec<u64> = (1..=q).collect();
    let counts_per_b: Vec<u64> = par::map(exec, &bs, |&b| good_set(&table, b, threshold).len() as u64);
    let total = counts_per_b.iter().sum();
    let mut best_b = 1;
    for (i, &c) in counts_per_b.iter().enumerate() {
        if c > counts_per_b[best_b as usize - 1] {
            best_b = i as u64 + 1;
        }
    }
    let best_good_set = good_set(&table, best_b, threshold);
    Ok(GoodSetCensus {
        k,
        q,
        alpha1: ALPHA1,
        counts_per_b,
        total,
        best_b,
        best_good_set,
    })
}

/// Sampling pattern for the measured lower envelope on one interval: the
/// sup over `t` is taken on `t_samples` evenly spaced points of
/// `|t − b/q| ≤ 1/(100N^k)`, and the inf over `x` on `x_samples` evenly
/// spaced points of `J(q, a)`, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sampling {
    pub x_samples: u32,
    pub t_samples: u32,
}

impl Default for Sampling {
    fn default() -> Self {
        Sampling {
            x_samples: 5,
            t_samples: 9,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CertificateInterval {
    pub q: u64,
    pub a: u64,
    pub b: u64,
    pub center: f64,
    pub radius: f64,
    /// Measured `inf_{x∈J} sup_{|t−b/q|≤1/(100N^k)} |ω(x,t)|`.
    pub inf_sup: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LowerBoundCertificate {
    pub n: u64,
    pub k: u32,
    pub c1: f64,
    pub primes: Vec<u64>,
    pub chosen_b: BTreeMap<u64, u64>,
    pub censuses: Vec<GoodSetCensus>,
    pub dropped_centers: Vec<Rational>,
    pub intervals: Vec<CertificateInterval>,
    pub sampling: Sampling,
    pub l1_lower: f64,
    /// `N^{3/4}`
    pub target: f64,
}

impl LowerBoundCertificate {
    pub fn ratio(&self) -> f64 {
        self.l1_lower / self.target
    }

    /// Centers pairwise more than `2/(100N)` apart on the circle.
    pub fn intervals_disjoint(&self) -> bool {
        let mut c: Vec<f64> = self.intervals.iter().map(|i| i.center.rem_euclid(1.0)).collect();
        c.sort_by(f64::total_cmp);
        let gap = 2.0 / (100.0 * self.n as f64);
        let wrap = match (c.first(), c.last()) {
            (Some(f), Some(l)) if c.len() > 1 => f + 1.0 - l > gap,
            _ => true,
        };
        wrap && c.windows(2).all(|w| w[1] - w[0] > gap)
    }
}

/// Admissible primes `q ∈ [c₁√N, √N]` with `q ≥ 3` and `q ∤ k`.
pub fn certificate_primes(n: u64, k: u32, c1: f64) -> Result<Vec<u64>> {
    if !(c1 > 0.0 && c1 < 1.0) {
        return Err(Error::invalid(format!("c1 must lie in (0, 1), got {c1}")));
    }
    let root = (n as f64).sqrt();
    let lo = (c1 * root).ceil() as u64;
    let hi = root.floor() as u64;
    if lo > hi {
        return Ok(Vec::new());
    }
    Ok(primes_in(lo, hi)?
        .into_iter()
        .filter(|&q| q >= 3 && !(k as u64).is_multiple_of(q))
        .collect())
}

fn measure_interval(params: WeylParams, iv: &CertificateInterval, s: Sampling) -> f64 {
    let n = params.n() as f64;
    let t_radius = 1.0 / (100.0 * n.powi(params.k() as i32));
    let t0 = iv.b as f64 / iv.q as f64;
    let spread = |count: u32, j: u32| {
        if count <= 1 {
            0.0
        } else {
            2.0 * j as f64 / (count - 1) as f64 - 1.0
        }
    };
    (0..s.x_samples.max(1))
        .map(|i| {
            let x = iv.center + iv.radius * spread(s.x_samples, i);
            (0..s.t_samples.max(1))
                .map(|j| {
                    let t = t0 + t_radius * spread(s.t_samples, j);
                    eval_weyl_sum(params, &PhasePoint::new(x, t)).norm()
                })
                .fold(0.0, f64::max)
        })
        .fold(f64::INFINITY, f64::min)
}

fn l1_from_intervals(intervals: &[CertificateInterval]) -> f64 {
    let terms: Vec<f64> = intervals.iter().map(|iv| 2.0 * iv.radius * iv.inf_sup).collect();
    pairwise_sum(&terms)
}

pub fn build_certificate(n: u64, k: u32, c1: f64) -> Result<LowerBoundCertificate> {
    build_certificate_with(n, k, c1, Sampling::default(), Exec::default())
}

pub fn build_certificate_with(
    n: u64,
    k: u32,
    c1: f64,
    sampling: Sampling,
    exec: Exec,
) -> Result<LowerBoundCertificate> {
    let params = WeylParams::new(n, k)?;
    if k < 3 {
        return Err(Error::invalid("the certificate needs k ≥ 3"));
    }
    let primes = certificate_primes(n, k, c1)?;
    if primes.is_empty() {
        return Err(Error::invalid(format!(
            "no admissible prime in [{c1}·√{n}, √{n}]; increase N or decrease c1"
        )));
    }
    let censuses = primes
        .iter()
        .map(|&q| good_set_census_with(k, q, exec))
        .collect::<Result<Vec<_>>>()?;
    let chosen_b: BTreeMap<u64, u64> = censuses.iter().map(|c| (c.q, c.best_b)).collect();

    // centers are compared as reduced fractions; a repeated one is dropped
    // from every prime that produced it
    let mut seen: BTreeMap<Rational, u32> = BTreeMap::new();
    for c in &censuses {
        for &a in &c.best_good_set {
            *seen.entry(Rational::new(a as i64, c.q)?).or_default() += 1;
        }
    }
    let dropped: BTreeSet<Rational> = seen.into_iter().filter(|&(_, m)| m > 1).map(|(r, _)| r).collect();

    let radius = 1.0 / (100.0 * n as f64);
    let mut intervals = Vec::new();
    for c in &censuses {
        for &a in &c.best_good_set {
            if dropped.contains(&Rational::new(a as i64, c.q)?) {
                continue;
            }
            intervals.push(CertificateInterval {
                q: c.q,
                a,
                b: c.best_b,
                center: a as f64 / c.q as f64,
                radius,
                inf_sup: 0.0,
            });
        }
    }
    let measured = par::map(exec, &intervals, |iv| measure_interval(params, iv, sampling));
    for (iv, m) in intervals.iter_mut().zip(measured) {
        iv.inf_sup = m;
    }
    let l1_lower = l1_from_intervals(&intervals);
    Ok(LowerBoundCertificate {
        n,
        k,
        c1,
        primes,
        chosen_b,
        censuses,
        dropped_centers: dropped.into_iter().collect(),
        intervals,
        sampling,
        l1_lower,
        target: (n as f64).powf(0.75),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntervalCheck {
    pub q: u64,
    pub a: u64,
    pub b: u64,
    /// `|ω(a/q, b/q)|` with exact phases.
    pub center_value: f64,
    /// `(N/q)·|S_k(b, a; q)|`
    pub center_expected: f64,
    /// Minimum of `|ω|` over the center and the random points.
    pub min_value: f64,
    /// `min_value / (N/√q)`
    pub theta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateVerification {
    pub checks: Vec<IntervalCheck>,
    /// Minimum over intervals; `None` without intervals.
    pub theta: Option<f64>,
    /// Largest `| |ω(center)| − (N/q)|S| |`; complete periods bound it by `2q`.
    pub max_center_deviation: f64,
    pub max_center_deviation_over_q: f64,
    pub l1_lower: f64,
    pub l1_reported: f64,
    pub relative_difference: f64,
    /// `l1_lower / N^{3/4}`
    pub ratio: f64,
}

/// Re-evaluates every rectangle `|x − a/q| ≤ 1/(100N)`, `|t − b/q| ≤
/// 1/(100N^k)` by direct summation at its center and `random_points` further
/// points, and recomputes the `L¹` bound from the sampling pattern.
pub fn verify_certificate(
    cert: &LowerBoundCertificate,
    random_points: u32,
    seed: u64,
    exec: Exec,
) -> Result<CertificateVerification> {
    let params = WeylParams::new(cert.n, cert.k)?;
    let n = cert.n as f64;
    let t_radius = 1.0 / (100.0 * n.powi(cert.k as i32));

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let offsets: Vec<Vec<(f64, f64)>> = cert
        .intervals
        .iter()
        .map(|iv| {
            (0..random_points)
                .map(|_| {
                    (
                        rng.random_range(-iv.radius..=iv.radius),
                        rng.random_range(-t_radius..=t_radius),
                    )
                })
                .collect()
        })
        .collect();
    let work: Vec<(CertificateInterval, Vec<(f64, f64)>)> = cert.intervals.iter().copied().zip(offsets).collect();

    let results = par::map(exec, &work, |(iv, offs)| {
        let q = iv.q;
        let center_t = Rational::new(iv.b as i64, q).expect("q ≥ 1");
        let center_value = eval_weyl_sum(params, &PhasePoint::with_exact_t(iv.center, center_t)).norm();
        let gauss = eval_gauss_sum(cert.k, iv.b as i64, iv.a as i64, q).norm();
        let t0 = iv.b as f64 / q as f64;
        let min_value = offs
            .iter()
            .map(|&(dx, dt)| eval_weyl_sum(params, &PhasePoint::new(iv.center + dx, t0 + dt)).norm())
            .fold(center_value, f64::min);
        let mut recomputed = *iv;
        recomputed.inf_sup = measure_interval(params, iv, cert.sampling);
        (
            IntervalCheck {
                q,
                a: iv.a,
                b: iv.b,
                center_value,
                center_expected: n / q as f64 * gauss,
                min_value,
                theta: min_value / (n / (q as f64).sqrt()),
            },
            recomputed,
        )
    });
    let (checks, recomputed): (Vec<IntervalCheck>, Vec<CertificateInterval>) = results.into_iter().unzip();

    let theta = checks.iter().map(|c| c.theta).reduce(f64::min);
    let deviations = checks.iter().map(|c| {
        let d = (c.center_value - c.center_expected).abs();
        (d, d / c.q as f64)
    });
    let (max_center_deviation, max_center_deviation_over_q) =
        deviations.fold((0.0f64, 0.0f64), |(a, b), (d, r)| (a.max(d), b.max(r)));
    let l1_lower = l1_from_intervals(&recomputed);
    let relative_difference = if cert.l1_lower == 0.0 && l1_lower == 0.0 {
        0.0
    } else {
        (l1_lower - cert.l1_lower).abs() / cert.l1_lower.abs().max(l1_lower.abs())
    };
    Ok(CertificateVerification {
        checks,
        theta,
        max_center_deviation,
        max_center_deviation_over_q,
        l1_lower,
        l1_reported: cert.l1_lower,
        relative_difference,
        ratio: l1_lower / n.powf(0.75),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrivialBound {
    /// Minimum of `|ω|` on the 16×16 grid of `[0, 10⁻⁶/N] × [0, 10⁻⁶/N^k]`.
    pub grid_inf: f64,
    /// `0.99·N·(10⁻⁶/N)^{1/p}`
    pub value: f64,
}

/// `‖F‖_p ≥ 0.99·N·|E|^{1/p}` from constructive interference on
/// `E = [0, 10⁻⁶/N]`.
pub fn trivial_lower_bound(n: u64, k: u32, p: f64) -> Result<TrivialBound> {
    let params = WeylParams::new(n, k)?;
    if !(p > 0.0) {
        return Err(Error::invalid("p must be positive"));
    }
    let nf = n as f64;
    let x_max = 1e-6 / nf;
    let t_max = 1e-6 / nf.powi(k as i32);
    let mut grid_inf = f64::INFINITY;
    for i in 0..16 {
        for j in 0..16 {
            let pt = PhasePoint::new(x_max * i as f64 / 15.0, t_max * j as f64 / 15.0);
            grid_inf = grid_inf.min(eval_weyl_sum(params, &pt).norm());
        }
    }
    Ok(TrivialBound {
        grid_inf,
        value: 0.99 * nf * x_max.powf(1.0 / p),
    })
}
