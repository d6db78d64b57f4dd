//! Independent reference implementations used by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashSet};

use boxpierce::arrangement::ArrangementDs;
use boxpierce::geom::{normalize_int_boxes, BoxD, PointD, ProblemInstance};
use boxpierce::range_tree::RangeTree;
use boxpierce::rng::{rng_from_seed, Rng};
use boxpierce::segtree::LazySegTree;
use boxpierce::weight::{Dyadic, Weight};
use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::Rng as _;

pub fn bx(lo: &[i64], hi: &[i64]) -> BoxD {
    BoxD::new(lo.to_vec(), hi.to_vec())
}

/// Random boxes with integer corners in `[0, range)`, normalized.
pub fn random_instance(rng: &mut Rng, n: usize, d: usize, range: i64, max_side: i64) -> ProblemInstance {
    let boxes: Vec<BoxD> = (0..n)
        .map(|_| {
            let mut lo = Vec::with_capacity(d);
            let mut hi = Vec::with_capacity(d);
            for _ in 0..d {
                let a = rng.gen_range(0..range);
                let w = rng.gen_range(0..=max_side);
                lo.push(a);
                hi.push(a + w);
            }
            BoxD::new(lo, hi)
        })
        .collect();
    normalize_int_boxes(&boxes).unwrap()
}

pub fn seeded(seed: u64) -> Rng {
    rng_from_seed(seed)
}

/// Vertices of the arrangement, enumerated by choosing one facet (box and
/// side) per axis, intersecting the supporting hyperplanes, and keeping the
/// point when it lies on all chosen facets.
pub fn vertices_by_facets(boxes: &[BoxD], d: usize) -> Vec<PointD> {
    let n = boxes.len();
    let mut out: HashSet<PointD> = HashSet::new();
    let choices = 2 * n;
    let mut idx = vec![0usize; d];
    if n == 0 {
        return Vec::new();
    }
    loop {
        let p: PointD = (0..d)
            .map(|a| {
                let b = &boxes[idx[a] / 2];
                if idx[a] % 2 == 0 {
                    b.lo[a]
                } else {
                    b.hi[a]
                }
            })
            .collect();
        let on_facets = (0..d).all(|a| {
            let b = &boxes[idx[a] / 2];
            (0..d).all(|j| b.lo[j] <= p[j] && p[j] <= b.hi[j])
        });
        if on_facets {
            out.insert(p);
        }
        let mut a = d;
        loop {
            if a == 0 {
                let mut v: Vec<PointD> = out.into_iter().collect();
                v.sort();
                return v;
            }
            a -= 1;
            idx[a] += 1;
            if idx[a] < choices {
                break;
            }
            idx[a] = 0;
        }
    }
}

/// Explicit vertex set with exact doubling weights.
pub struct NaiveArrangement {
    pub d: usize,
    pub boxes: Vec<BoxD>,
    pub active: Vec<bool>,
    pub mult: Vec<u32>,
}

impl NaiveArrangement {
    pub fn new(d: usize, boxes: Vec<BoxD>) -> Self {
        let n = boxes.len();
        NaiveArrangement {
            d,
            boxes,
            active: vec![false; n],
            mult: vec![0; n],
        }
    }

    pub fn vertices(&self) -> Vec<PointD> {
        let act: Vec<BoxD> = self
            .boxes
            .iter()
            .zip(&self.active)
            .filter(|(_, &a)| a)
            .map(|(b, _)| b.clone())
            .collect();
        vertices_by_facets(&act, self.d)
    }

    pub fn exponent(&self, p: &[i64]) -> u32 {
        self.boxes
            .iter()
            .zip(&self.mult)
            .filter(|(b, _)| b.contains(p))
            .map(|(_, &m)| m)
            .sum()
    }

    pub fn weight(&self, q: &BoxD) -> BigUint {
        let mut s = BigUint::from(0u32);
        for p in self.vertices() {
            if q.contains(&p) {
                s += BigUint::from(1u32) << self.exponent(&p);
            }
        }
        s
    }

    /// Exact distribution over the vertices in `q`.
    pub fn distribution(&self, q: &BoxD) -> BTreeMap<PointD, f64> {
        let mut m = BTreeMap::new();
        let mut total = 0.0;
        for p in self.vertices() {
            if q.contains(&p) {
                let w = 2f64.powi(self.exponent(&p) as i32);
                total += w;
                m.insert(p, w);
            }
        }
        for v in m.values_mut() {
            *v /= total;
        }
        m
    }
}

/// Per-coordinate exponent counters for the segment tree.
pub struct NaiveSeg {
    pub coords: Vec<i64>,
    pub exp: Vec<i64>,
    pub active: Vec<bool>,
}

impl NaiveSeg {
    pub fn new(coords: Vec<i64>) -> Self {
        let n = coords.len();
        NaiveSeg {
            coords,
            exp: vec![0; n],
            active: vec![false; n],
        }
    }
    pub fn scale(&mut self, lo: i64, hi: i64, delta: i64) {
        for (i, &c) in self.coords.iter().enumerate() {
            if lo <= c && c <= hi {
                self.exp[i] += delta;
            }
        }
    }
    /// Weight in `[lo, hi]` times `2^shift` (to keep it integral).
    pub fn weight_scaled(&self, lo: i64, hi: i64, shift: i64) -> BigUint {
        let mut s = BigUint::from(0u32);
        for (i, &c) in self.coords.iter().enumerate() {
            if self.active[i] && lo <= c && c <= hi {
                s += BigUint::from(1u32) << (self.exp[i] + shift) as u64;
            }
        }
        s
    }
}

/// Minimum piercing number of intervals by trying subsets of endpoints.
pub fn brute_interval_pierce(iv: &[(i64, i64)]) -> usize {
    let mut cands: Vec<i64> = iv.iter().flat_map(|&(a, b)| [a, b]).collect();
    cands.sort_unstable();
    cands.dedup();
    let m = cands.len();
    let mut best = usize::MAX;
    for mask in 0u32..(1 << m) {
        let k = mask.count_ones() as usize;
        if k >= best {
            continue;
        }
        let pts: Vec<i64> = (0..m).filter(|&i| mask >> i & 1 == 1).map(|i| cands[i]).collect();
        if iv.iter().all(|&(a, b)| pts.iter().any(|&p| a <= p && p <= b)) {
            best = k;
        }
    }
    best
}

/// Maximum number of pairwise-disjoint intervals by subset enumeration.
pub fn brute_interval_independent(iv: &[(i64, i64)]) -> usize {
    let n = iv.len();
    let mut best = 0;
    for mask in 0u32..(1 << n) {
        let k = mask.count_ones() as usize;
        if k <= best {
            continue;
        }
        let sel: Vec<(i64, i64)> = (0..n).filter(|&i| mask >> i & 1 == 1).map(|i| iv[i]).collect();
        let ok = (0..sel.len()).all(|i| (i + 1..sel.len()).all(|j| sel[i].1 < sel[j].0 || sel[j].1 < sel[i].0));
        if ok {
            best = k;
        }
    }
    best
}

pub fn pairwise_disjoint(boxes: &[BoxD]) -> bool {
    (0..boxes.len()).all(|i| (i + 1..boxes.len()).all(|j| !boxes[i].intersects(&boxes[j])))
}

/// Chi-square statistic and degrees of freedom of observed counts against
/// expected probabilities; cells with tiny expectation are pooled.
pub fn chi_square(observed: &BTreeMap<PointD, u64>, expected: &BTreeMap<PointD, f64>, draws: u64) -> (f64, usize) {
    let mut stat = 0.0;
    let mut cells = 0usize;
    let mut pool_o = 0.0;
    let mut pool_e = 0.0;
    for (p, &q) in expected {
        let o = *observed.get(p).unwrap_or(&0) as f64;
        let e = q * draws as f64;
        if e < 5.0 {
            pool_o += o;
            pool_e += e;
            continue;
        }
        stat += (o - e) * (o - e) / e;
        cells += 1;
    }
    if pool_e > 0.0 {
        stat += (pool_o - pool_e) * (pool_o - pool_e) / pool_e.max(1e-12);
        cells += 1;
    }
    let extra: u64 = observed
        .iter()
        .filter(|(p, _)| !expected.contains_key(*p))
        .map(|(_, &c)| c)
        .sum();
    if extra > 0 {
        stat = f64::INFINITY;
    }
    (stat, cells.saturating_sub(1).max(1))
}

pub fn chi_square_critical(df: usize, alpha: f64) -> f64 {
    use statrs::distribution::{ChiSquared, ContinuousCDF};
    ChiSquared::new(df as f64).unwrap().inverse_cdf(1.0 - alpha)
}

fn weight_u128(w: &Dyadic) -> Option<u128> {
    w.to_u128()
}

fn big_u128(b: &BigUint) -> Option<u128> {
    use num_traits::ToPrimitive;
    b.to_u128()
}

/// Random insert/delete/double/halve script on the arrangement structure
/// with exact weights, checked against [`NaiveArrangement`]. Returns the
/// number of weight queries compared.
pub fn arrangement_script(seed: u64, d: usize, n: usize, ops: usize) -> Result<usize, String> {
    let mut rng = seeded(seed);
    let inst = random_instance(&mut rng, n, d, 30, 15);
    let mut ds = ArrangementDs::<Dyadic>::build(d, inst.boxes.clone()).map_err(|e| e.to_string())?;
    let mut naive = NaiveArrangement::new(d, inst.boxes.clone());
    let mut checks = 0;
    let fail = |step: usize, what: String| Err(format!("seed {seed} d {d} step {step}: {what}"));
    for step in 0..ops {
        let i = rng.gen_range(0..n);
        match rng.gen_range(0..6) {
            0 | 1 => {
                if ds.insert(i).is_ok() == naive.active[i] {
                    return fail(step, format!("insert {i}"));
                }
                naive.active[i] = true;
            }
            2 => {
                if ds.delete(i).is_ok() != naive.active[i] {
                    return fail(step, format!("delete {i}"));
                }
                naive.active[i] = false;
            }
            3 | 4 => {
                ds.double(i).map_err(|e| e.to_string())?;
                naive.mult[i] += 1;
            }
            _ => {
                if ds.halve(i).is_ok() != (naive.mult[i] > 0) {
                    return fail(step, format!("halve {i}"));
                }
                naive.mult[i] = naive.mult[i].saturating_sub(1);
            }
        }
        if step % 7 == 0 {
            let q = if rng.gen_bool(0.5) {
                inst.boxes[rng.gen_range(0..n)].clone()
            } else {
                let lo: Vec<i64> = (0..d).map(|_| rng.gen_range(-2..60)).collect();
                let hi: Vec<i64> = lo.iter().map(|&x| x + rng.gen_range(0..40)).collect();
                BoxD::new(lo, hi)
            };
            let got = weight_u128(&ds.weight(&q));
            let want = big_u128(&naive.weight(&q));
            if got != want {
                return fail(step, format!("query {q:?}: {got:?} != {want:?}"));
            }
            checks += 1;
        }
    }
    let all = BoxD::new(vec![-100; d], vec![1000; d]);
    if weight_u128(&ds.total()) != big_u128(&naive.weight(&all)) {
        return fail(ops, "total".into());
    }
    if ds.audit() != 0 {
        return fail(ops, "audit".into());
    }
    Ok(checks + 1)
}

/// Random script on the segment tree with exact weights, checked against
/// [`NaiveSeg`]. Exponents stay within `[-SEG_SHIFT, SEG_SHIFT]` so that
/// every scaled weight is an integer.
pub const SEG_SHIFT: i64 = 40;

pub fn segtree_script(seed: u64, ops: usize) -> Result<usize, String> {
    let mut rng = seeded(seed);
    let n = rng.gen_range(1..40);
    let mut coords: Vec<i64> = (0..n).map(|_| rng.gen_range(-100..100)).collect();
    coords.sort_unstable();
    coords.dedup();
    let mut st = LazySegTree::<Dyadic>::build(coords.clone()).map_err(|e| e.to_string())?;
    let mut naive = NaiveSeg::new(coords.clone());
    let fail = |step: usize, what: String| Err(format!("seed {seed} step {step}: {what}"));
    let pick = |rng: &mut Rng| coords[rng.gen_range(0..coords.len())];
    let mut checks = 0;
    for step in 0..ops {
        match rng.gen_range(0..8) {
            0 | 1 => {
                let c = pick(&mut rng);
                let i = coords.binary_search(&c).unwrap();
                if st.insert(c).is_ok() == naive.active[i] {
                    return fail(step, format!("insert {c}"));
                }
                naive.active[i] = true;
            }
            2 => {
                let c = pick(&mut rng);
                let i = coords.binary_search(&c).unwrap();
                if st.delete(c).is_ok() != naive.active[i] {
                    return fail(step, format!("delete {c}"));
                }
                naive.active[i] = false;
            }
            op => {
                let lo = rng.gen_range(-110..110);
                let hi = lo + rng.gen_range(-5..80);
                let delta = match op {
                    3 | 4 => 1,
                    5 | 6 => -1,
                    _ => rng.gen_range(-3..=3),
                };
                let ok = (0..coords.len())
                    .filter(|&i| lo <= coords[i] && coords[i] <= hi)
                    .all(|i| (naive.exp[i] + delta).abs() <= SEG_SHIFT);
                if !ok {
                    continue;
                }
                match delta {
                    1 => st.double(lo, hi),
                    -1 => st.halve(lo, hi),
                    _ => st.scale(lo, hi, delta),
                }
                naive.scale(lo, hi, delta);
            }
        }
        let lo = rng.gen_range(-110..110);
        let hi = lo + rng.gen_range(-5..120);
        let got = weight_u128(&st.weight(lo, hi).mul_pow2(SEG_SHIFT));
        let want = big_u128(&naive.weight_scaled(lo, hi, SEG_SHIFT));
        if got != want {
            return fail(step, format!("weight [{lo}, {hi}]: {got:?} != {want:?}"));
        }
        let c = pick(&mut rng);
        let i = coords.binary_search(&c).unwrap();
        if st.exponent(c) != Ok(naive.exp[i]) {
            return fail(step, format!("exponent at {c}"));
        }
        checks += 2;
    }
    let total = weight_u128(&st.total().mul_pow2(SEG_SHIFT));
    if total != big_u128(&naive.weight_scaled(i64::MIN, i64::MAX, SEG_SHIFT)) {
        return fail(ops, "total".into());
    }
    if st.audit() != 0 {
        return fail(ops, "audit".into());
    }
    Ok(checks + 1)
}

pub fn random_points(rng: &mut Rng, n: usize, d: usize, range: i64) -> Vec<PointD> {
    (0..n).map(|_| (0..d).map(|_| rng.gen_range(0..range)).collect()).collect()
}

pub fn random_box(rng: &mut Rng, d: usize, range: i64) -> BoxD {
    let mut lo = Vec::new();
    let mut hi = Vec::new();
    for _ in 0..d {
        let a = rng.gen_range(0..range);
        let b = rng.gen_range(0..range);
        lo.push(a.min(b));
        hi.push(a.max(b));
    }
    BoxD::new(lo, hi)
}

pub fn direct_count(pts: &[PointD], b: &BoxD) -> usize {
    pts.iter().filter(|p| b.contains(p)).count()
}

/// Heavy boxes for the uniform distribution on `pts`, by rejection.
pub fn heavy_boxes(rng: &mut Rng, pts: &[PointD], eps: f64, m: usize, range: i64) -> Vec<BoxD> {
    let d = pts[0].len();
    let tree = RangeTree::build(d, pts.to_vec());
    let mut out = Vec::new();
    while out.len() < m {
        let b = random_box(rng, d, range);
        if tree.count(&b) as f64 >= eps * pts.len() as f64 {
            out.push(b);
        }
    }
    out
}

/// Maximal anchored boxes by scanning every integer extent vector.
pub fn brute_crates(pts: &[PointD], cell: &BoxD, k: usize) -> BTreeSet<BoxD> {
    let d = cell.dim();
    let width: Vec<i64> = (0..d).map(|a| cell.hi[a] - cell.lo[a]).collect();
    let mut out = BTreeSet::new();
    for mask in 0..1usize << d {
        let v: Vec<i64> = (0..d)
            .map(|a| if mask >> a & 1 == 0 { cell.lo[a] } else { cell.hi[a] })
            .collect();
        let make = |ext: &[i64]| -> BoxD {
            let lo = (0..d).map(|a| if mask >> a & 1 == 0 { v[a] } else { v[a] - ext[a] }).collect();
            let hi = (0..d).map(|a| if mask >> a & 1 == 0 { v[a] + ext[a] } else { v[a] }).collect();
            BoxD::new(lo, hi)
        };
        let interior = |b: &BoxD| {
            pts.iter()
                .filter(|p| (0..d).all(|a| b.lo[a] < p[a] && p[a] < b.hi[a]))
                .count()
        };
        let mut ext = vec![1i64; d];
        loop {
            let b = make(&ext);
            if interior(&b) <= k {
                let maximal = (0..d).all(|a| {
                    if ext[a] == width[a] {
                        return true;
                    }
                    let mut e2 = ext.clone();
                    e2[a] += 1;
                    interior(&make(&e2)) > k
                });
                if maximal {
                    out.insert(b);
                }
            }
            let mut a = 0;
            while a < d {
                ext[a] += 1;
                if ext[a] <= width[a] {
                    break;
                }
                ext[a] = 1;
                a += 1;
            }
            if a == d {
                break;
            }
        }
    }
    out
}

pub fn distinct_points(rng: &mut Rng, m: usize, d: usize, cell: &BoxD) -> Vec<PointD> {
    let mut axes: Vec<Vec<i64>> = (0..d)
        .map(|a| {
            let mut v: Vec<i64> = (cell.lo[a] + 1..cell.hi[a]).collect();
            v.shuffle(rng);
            v
        })
        .collect();
    (0..m).map(|_| axes.iter_mut().map(|v| v.pop().unwrap()).collect()).collect()
}

pub fn prefix_counts(x: &[PointD], rho: usize) -> Vec<Vec<u32>> {
    let mut s = vec![vec![0u32; rho + 1]; rho + 1];
    for p in x {
        s[p[0] as usize][p[1] as usize] += 1;
    }
    for i in 1..=rho {
        for j in 1..=rho {
            s[i][j] += s[i - 1][j] + s[i][j - 1] - s[i - 1][j - 1];
        }
    }
    s
}

/// Every rank rectangle with at least `4k` points contains a member.
pub fn covering_misses(x: &[PointD], rho: usize, k: usize, fam: &[BoxD]) -> usize {
    let s = prefix_counts(x, rho);
    let cnt = |x1: usize, x2: usize, y1: usize, y2: usize| {
        s[x2][y2] + s[x1 - 1][y1 - 1] - s[x1 - 1][y2] - s[x2][y1 - 1]
    };
    let mut misses = 0;
    for x1 in 1..=rho {
        for x2 in x1..=rho {
            // best[y1] = smallest member top among members inside the
            // x-range whose bottom is at least y1
            let mut best = vec![i64::MAX; rho + 2];
            for f in fam {
                if f.lo[0] >= x1 as i64 && f.hi[0] <= x2 as i64 {
                    let y = f.lo[1] as usize;
                    best[y] = best[y].min(f.hi[1]);
                }
            }
            for y in (1..=rho).rev() {
                best[y] = best[y].min(best[y + 1]);
            }
            for y1 in 1..=rho {
                for y2 in y1..=rho {
                    if cnt(x1, x2, y1, y2) as usize >= 4 * k && best[y1] > y2 as i64 {
                        misses += 1;
                    }
                }
            }
        }
    }
    misses
}
