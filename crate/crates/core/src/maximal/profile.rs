use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{sup_with_scan, t_grid_size, MaximalValue, SupOptions};
use crate::error::{Error, Result};
use crate::nt::{gcd, Rational};
use crate::par::{self, Exec};
use crate::sums::{TGridScan, WeylParams};

/// Quadrature nodes on the circle with their weights (which sum to 1).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct XGrid {
    pub nodes: Vec<Rational>,
    pub weights: Vec<f64>,
}

impl XGrid {
    /// `m/points` for `0 ≤ m < points`, equal weights.
    pub fn uniform(points: u64) -> Result<Self> {
        if points == 0 {
            return Err(Error::invalid("x grid needs at least one point"));
        }
        let nodes = (0..points)
            .map(|m| Rational::new(m as i64, points))
            .collect::<Result<Vec<_>>>()?;
        Ok(XGrid {
            nodes,
            weights: vec![1.0 / points as f64; points as usize],
        })
    }

    /// Uniform nodes plus every reduced `r/q` with `q ≤ max_den`; each node is
    /// weighted by the length of its cell between neighbouring midpoints.
    pub fn farey_augmented(points: u64, max_den: u64) -> Result<Self> {
        let mut nodes = XGrid::uniform(points)?.nodes;
        for q in 1..=max_den {
            for r in 0..q {
                if gcd(r, q) == 1 {
                    nodes.push(Rational::new(r as i64, q)?);
                }
            }
        }
        nodes.sort();
        nodes.dedup();
        let len = nodes.len();
        let pos: Vec<f64> = nodes.iter().map(|r| r.to_f64()).collect();
        let weights = (0..len)
            .map(|i| {
                let prev = if i == 0 { pos[len - 1] - 1.0 } else { pos[i - 1] };
                let next = if i + 1 == len { pos[0] + 1.0 } else { pos[i + 1] };
                0.5 * (next - prev)
            })
            .collect();
        Ok(XGrid { nodes, weights })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Symmetry class representative of `x ∈ [0,1)` in `[0, 1/4]`.
///
/// Because `n ≡ n^k (mod 2)`, `ω(x + 1/2, t) = ω(x, t + 1/2)`, and
/// `ω(-x, -t) = conj ω(x, t)`; hence `F(x) = F(x + 1/2) = F(-x)`.
/// Returns the representative and the map taking its `t_star` to the one
/// for `x`.
pub fn canonical_node(x: Rational) -> (Rational, TMap) {
    let x = x.fract();
    let (num, den) = (x.num() as i128, x.den() as i128);
    // y = x mod 1/2, as (2·num - den)/(2·den) when x ≥ 1/2
    let shifted = 2 * num >= den;
    let (yn, yd) = if shifted { (2 * num - den, 2 * den) } else { (num, den) };
    // reflect y ↦ 1/2 - y when y > 1/4
    let reflected = 4 * yn > yd;
    let (cn, cd) = if reflected { (yd - 2 * yn, 2 * yd) } else { (yn, yd) };
    let c = Rational::new(cn as i64, cd as u64).expect("positive denominator");
    (c, TMap { shifted, reflected })
}

/// How the argmax in `t` moves under the symmetries of [`canonical_node`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TMap {
    shifted: bool,
    reflected: bool,
}

impl TMap {
    pub fn apply(self, t: f64) -> f64 {
        // x = c  → t
        // x = 1/2 - c: ω(1/2 - c, s) = conj ω(c, -s - 1/2) → s = -t - 1/2
        // x = y + 1/2: ω(y + 1/2, s) = ω(y, s + 1/2)      → s = t - 1/2
        let mut s = t;
        if self.reflected {
            s = -s - 0.5;
        }
        if self.shifted {
            s -= 0.5;
        }
        s.rem_euclid(1.0) % 1.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileOptions {
    pub sup: SupOptions,
    pub exec: Exec,
    /// Evaluate each symmetry class once.
    pub use_symmetry: bool,
}

impl Default for ProfileOptions {
    fn default() -> Self {
        ProfileOptions {
            sup: SupOptions::default(),
            exec: Exec::default(),
            use_symmetry: true,
        }
    }
}

/// `F` sampled on an [`XGrid`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaximalProfile {
    pub params: WeylParams,
    pub grid: XGrid,
    pub values: Vec<MaximalValue>,
}

impl MaximalProfile {
    pub fn compute(params: WeylParams, grid: XGrid, opts: &ProfileOptions) -> Result<Self> {
        let mut out = Self::compute_many(params, vec![grid], opts)?;
        Ok(out.pop().expect("one profile"))
    }

    /// Profiles on several grids, evaluating every distinct node once.
    pub fn compute_many(params: WeylParams, grids: Vec<XGrid>, opts: &ProfileOptions) -> Result<Vec<Self>> {
        let m = t_grid_size(params, &opts.sup)?;
        let key = |r: Rational| {
            if opts.use_symmetry {
                canonical_node(r)
            } else {
                (
                    r.fract(),
                    TMap {
                        shifted: false,
                        reflected: false,
                    },
                )
            }
        };
        let mut unique: BTreeMap<Rational, usize> = BTreeMap::new();
        for g in &grids {
            for &r in &g.nodes {
                let len = unique.len();
                unique.entry(key(r).0).or_insert(len);
            }
        }
        let mut keys: Vec<(Rational, usize)> = unique.iter().map(|(&r, &i)| (r, i)).collect();
        keys.sort_by_key(|&(_, i)| i);
        let xs: Vec<Rational> = keys.iter().map(|&(r, _)| r).collect();

        let evaluated = par::map_init(
            opts.exec,
            &xs,
            || TGridScan::new(params, m).expect("grid size validated"),
            |scan, r| sup_with_scan(scan, r.to_f64()),
        );

        Ok(grids
            .into_iter()
            .map(|grid| {
                let values = grid
                    .nodes
                    .iter()
                    .map(|&r| {
                        let (c, map) = key(r);
                        let mut v = evaluated[unique[&c]];
                        v.t_star = map.apply(v.t_star);
                        v
                    })
                    .collect();
                MaximalProfile { params, grid, values }
            })
            .collect())
    }

    pub fn samples(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.value).collect()
    }
}
