//! Deterministic instance generators.

use std::str::FromStr;

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{usage, Error, Result};
use crate::geom::RawBox;
use crate::rng::{sub_rng, Rng};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    UniformRandom,
    /// Boxes grown around `k` plant points.
    PlantedPiercing,
    DisjointGrid,
    Nested,
    SquaresUniform,
    /// Degenerate boxes on a product of staircases.
    AdversarialCrate,
}

impl Kind {
    pub const ALL: [Kind; 6] = [
        Kind::UniformRandom,
        Kind::PlantedPiercing,
        Kind::DisjointGrid,
        Kind::Nested,
        Kind::SquaresUniform,
        Kind::AdversarialCrate,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Kind::UniformRandom => "uniform-random",
            Kind::PlantedPiercing => "planted-piercing",
            Kind::DisjointGrid => "disjoint-grid",
            Kind::Nested => "nested",
            Kind::SquaresUniform => "squares-uniform",
            Kind::AdversarialCrate => "adversarial-crate",
        }
    }
}

impl FromStr for Kind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Kind::ALL
            .iter()
            .copied()
            .find(|k| k.name() == s || (s == "uniform" && *k == Kind::UniformRandom) || (s == "planted" && *k == Kind::PlantedPiercing))
            .ok_or_else(|| usage(format!("unknown instance kind {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenParams {
    pub n: usize,
    pub d: usize,
    /// Plant count for planted instances, side count for grids.
    pub k: Option<usize>,
    /// Largest side length relative to the unit cube.
    pub max_side: Option<f64>,
}

impl GenParams {
    pub fn new(n: usize, d: usize) -> Self {
        GenParams { n, d, k: None, max_side: None }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct InstanceMeta {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Known upper bound on the piercing number.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_upper: Option<usize>,
    /// Known piercing number.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_exact: Option<usize>,
    /// Points that pierce every box (planted instances).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plant: Option<Vec<Vec<f64>>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Generated {
    pub boxes: Vec<RawBox>,
    pub meta: InstanceMeta,
}

fn default_side(d: usize) -> f64 {
    match d {
        1 | 2 => 0.3,
        3 => 0.45,
        _ => 0.6,
    }
}

/// Sides are drawn from `[side/3, side)`.
fn uniform_box(rng: &mut Rng, d: usize, side: f64) -> RawBox {
    let mut lo = Vec::with_capacity(d);
    let mut hi = Vec::with_capacity(d);
    for _ in 0..d {
        let w = rng.gen_range(side / 3.0..side);
        let a = rng.gen_range(0.0..1.0 - w);
        lo.push(a);
        hi.push(a + w);
    }
    RawBox::new(lo, hi)
}

pub fn generate(kind: Kind, p: GenParams, seed: u64) -> Result<Generated> {
    if p.d == 0 {
        return Err(usage("dimension must be positive"));
    }
    let mut rng = sub_rng(seed, kind.name(), 0);
    let mut meta = InstanceMeta {
        kind: Some(kind.name().to_string()),
        seed: Some(seed),
        ..InstanceMeta::default()
    };
    let d = p.d;
    let boxes = match kind {
        Kind::UniformRandom => {
            let side = p.max_side.unwrap_or_else(|| default_side(d));
            (0..p.n).map(|_| uniform_box(&mut rng, d, side)).collect()
        }
        Kind::PlantedPiercing => {
            let k = p.k.unwrap_or(10).max(1);
            let plant: Vec<Vec<f64>> = (0..k)
                .map(|_| (0..d).map(|_| rng.gen_range(0.0..1.0)).collect())
                .collect();
            let side = p.max_side.unwrap_or(0.3);
            let boxes = (0..p.n)
                .map(|i| {
                    let c = &plant[if i < k { i } else { rng.gen_range(0..k) }];
                    let lo = c.iter().map(|&x| x - rng.gen_range(0.0..side / 2.0)).collect();
                    let hi = c.iter().map(|&x| x + rng.gen_range(0.0..side / 2.0)).collect();
                    RawBox::new(lo, hi)
                })
                .collect();
            meta.p_upper = Some(k.min(p.n));
            meta.plant = Some(plant);
            boxes
        }
        Kind::DisjointGrid => {
            let k = p
                .k
                .unwrap_or_else(|| (p.n.max(1) as f64).powf(1.0 / d as f64).round().max(1.0) as usize);
            let total = k.pow(d as u32);
            let boxes = (0..total)
                .map(|mut c| {
                    let mut lo = Vec::with_capacity(d);
                    for _ in 0..d {
                        lo.push((c % k) as f64);
                        c /= k;
                    }
                    let hi = lo.iter().map(|x| x + 0.5).collect();
                    RawBox::new(lo, hi)
                })
                .collect();
            meta.p_exact = Some(total);
            meta.p_upper = Some(total);
            boxes
        }
        Kind::Nested => {
            let boxes = (0..p.n)
                .map(|i| {
                    let r = 1.0 + i as f64 + rng.gen_range(0.0..0.5);
                    RawBox::new(vec![-r; d], vec![r; d])
                })
                .collect();
            meta.p_exact = Some(usize::from(p.n > 0));
            meta.p_upper = meta.p_exact;
            boxes
        }
        Kind::SquaresUniform => {
            if d != 2 {
                return Err(usage("squares-uniform is planar"));
            }
            let side = p.max_side.unwrap_or_else(|| default_side(2));
            (0..p.n)
                .map(|_| {
                    let r = rng.gen_range(side / 6.0..side / 2.0);
                    let cx = rng.gen_range(r..1.0 - r);
                    let cy = rng.gen_range(r..1.0 - r);
                    RawBox::new(vec![cx - r, cy - r], vec![cx + r, cy + r])
                })
                .collect()
        }
        Kind::AdversarialCrate => {
            if d % 2 != 0 {
                return Err(usage("adversarial-crate needs an even dimension"));
            }
            let pts = adversarial_crate_points(p.n, d);
            meta.p_exact = Some(pts.len());
            meta.p_upper = Some(pts.len());
            pts.into_iter()
                .map(|q| {
                    let v: Vec<f64> = q.iter().map(|&x| x as f64).collect();
                    RawBox::new(v.clone(), v)
                })
                .collect()
        }
    };
    Ok(Generated { boxes, meta })
}

/// About `n` points in `[0, N + m + 2]^d`, `N` the point count and
/// `m = n / (d/2)` per factor, whose maximal empty boxes anchored at the
/// origin include the product of the `m + 1` maximal empty rectangles of
/// each planar staircase.
///
/// A point of factor `f` sits on a descending staircase in axes
/// `2f, 2f+1` (coordinates above `N`) and has small distinct coordinates
/// elsewhere, so it only blocks boxes through its staircase.
pub fn adversarial_crate_points(n: usize, d: usize) -> Vec<Vec<i64>> {
    let factors = d / 2;
    let m = (n / factors.max(1)).max(1) as i64;
    let top = factors as i64 * m;
    let mut out = Vec::new();
    let mut small = 1i64;
    for f in 0..factors {
        for i in 0..m {
            let mut p = vec![0i64; d];
            for (a, c) in p.iter_mut().enumerate() {
                if a / 2 != f {
                    *c = small;
                }
            }
            small += 1;
            p[2 * f] = top + 1 + i;
            p[2 * f + 1] = top + m - i;
            out.push(p);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_sized() {
        for kind in [Kind::UniformRandom, Kind::PlantedPiercing, Kind::Nested] {
            let a = generate(kind, GenParams::new(50, 3), 9).unwrap();
            let b = generate(kind, GenParams::new(50, 3), 9).unwrap();
            assert_eq!(a, b);
            assert_eq!(a.boxes.len(), 50);
        }
        let g = generate(Kind::DisjointGrid, GenParams { k: Some(5), ..GenParams::new(0, 2) }, 0).unwrap();
        assert_eq!(g.boxes.len(), 25);
        assert_eq!(g.meta.p_exact, Some(25));
    }

    #[test]
    fn planted_points_pierce() {
        let g = generate(Kind::PlantedPiercing, GenParams { k: Some(10), ..GenParams::new(300, 2) }, 4).unwrap();
        let plant = g.meta.plant.unwrap();
        assert_eq!(crate::geom::verify_piercing_raw(&g.boxes, &plant), Vec::<usize>::new());
    }

    #[test]
    fn kinds_parse() {
        for k in Kind::ALL {
            assert_eq!(k.name().parse::<Kind>().unwrap(), k);
        }
        assert!("nope".parse::<Kind>().is_err());
    }
}
