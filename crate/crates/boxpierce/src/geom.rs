//! Boxes, points, rank normalization and the brute-force oracles.
//!
//! Algorithms work on *normalized* instances: on every axis the `2n`
//! endpoint values are replaced by distinct even integers `0, 2, 4, ...`.
//! Odd coordinates then sit strictly between endpoints, which is handy
//! whenever a point in the interior of a box is needed.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{usage, Error, Result};

pub type PointD = Vec<i64>;

/// Closed axis-aligned box `[lo_0, hi_0] x ... x [lo_{d-1}, hi_{d-1}]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BoxD {
    pub lo: Vec<i64>,
    pub hi: Vec<i64>,
}

impl BoxD {
    pub fn new(lo: Vec<i64>, hi: Vec<i64>) -> Self {
        debug_assert_eq!(lo.len(), hi.len());
        BoxD { lo, hi }
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    #[inline]
    pub fn contains(&self, p: &[i64]) -> bool {
        debug_assert_eq!(p.len(), self.lo.len());
        self.lo
            .iter()
            .zip(&self.hi)
            .zip(p)
            .all(|((&l, &h), &x)| l <= x && x <= h)
    }

    pub fn intersects(&self, other: &BoxD) -> bool {
        (0..self.dim()).all(|i| self.lo[i] <= other.hi[i] && other.lo[i] <= self.hi[i])
    }

    pub fn contains_box(&self, other: &BoxD) -> bool {
        (0..self.dim()).all(|i| self.lo[i] <= other.lo[i] && other.hi[i] <= self.hi[i])
    }

    /// Drops axis `axis`.
    pub fn project_out(&self, axis: usize) -> BoxD {
        let mut lo = self.lo.clone();
        let mut hi = self.hi.clone();
        lo.remove(axis);
        hi.remove(axis);
        BoxD { lo, hi }
    }

    /// A point strictly inside on every axis where the box has positive width.
    pub fn center(&self) -> PointD {
        (0..self.dim())
            .map(|i| self.lo[i] + (self.hi[i] - self.lo[i]) / 2)
            .collect()
    }
}

/// Checked membership test.
pub fn contains(b: &BoxD, p: &[i64]) -> Result<bool> {
    if b.lo.len() != p.len() || b.hi.len() != p.len() {
        return Err(usage(format!(
            "box of dimension {} vs point of dimension {}",
            b.lo.len(),
            p.len()
        )));
    }
    Ok(b.contains(p))
}

/// A box in original (un-normalized) coordinates, as read from files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawBox {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl RawBox {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Self {
        RawBox { lo, hi }
    }

    pub fn contains(&self, p: &[f64]) -> bool {
        (0..self.lo.len()).all(|i| self.lo[i] <= p[i] && p[i] <= self.hi[i])
    }

    pub fn intersects(&self, o: &RawBox) -> bool {
        (0..self.lo.len()).all(|i| self.lo[i] <= o.hi[i] && o.lo[i] <= self.hi[i])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProblemInstance {
    pub dimension: usize,
    pub boxes: Vec<BoxD>,
    /// `coordinate_map[axis][r]` is the original value of the endpoint with rank `r`.
    pub coordinate_map: Vec<Vec<f64>>,
}

impl ProblemInstance {
    /// Wraps boxes that already have distinct integer endpoints per axis.
    /// The coordinate map is the identity on the used values.
    pub fn from_normalized(dimension: usize, boxes: Vec<BoxD>) -> Result<Self> {
        for b in &boxes {
            if b.lo.len() != dimension || b.hi.len() != dimension {
                return Err(usage("box dimension differs from instance dimension"));
            }
        }
        Ok(ProblemInstance {
            dimension,
            boxes,
            coordinate_map: Vec::new(),
        })
    }

    pub fn len(&self) -> usize {
        self.boxes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.boxes.is_empty()
    }

    /// Instance restricted to `indices`, sharing the coordinate space.
    pub fn subset(&self, indices: &[usize]) -> ProblemInstance {
        ProblemInstance {
            dimension: self.dimension,
            boxes: indices.iter().map(|&i| self.boxes[i].clone()).collect(),
            coordinate_map: self.coordinate_map.clone(),
        }
    }

    /// True when endpoints are pairwise distinct per axis and every box has
    /// positive width.
    pub fn in_general_position(&self) -> bool {
        for axis in 0..self.dimension {
            let mut vals: Vec<i64> = Vec::with_capacity(2 * self.len());
            for b in &self.boxes {
                if b.lo[axis] >= b.hi[axis] {
                    return false;
                }
                vals.push(b.lo[axis]);
                vals.push(b.hi[axis]);
            }
            vals.sort_unstable();
            if vals.windows(2).any(|w| w[0] == w[1]) {
                return false;
            }
        }
        true
    }

    /// Maps a normalized coordinate back to the original axis value. Even
    /// `2r` and odd `2r+1` both map to the value of rank `r`, which keeps
    /// every containment relation intact.
    pub fn denormalize_coord(&self, axis: usize, c: i64) -> f64 {
        match self.coordinate_map.get(axis) {
            Some(vals) if !vals.is_empty() => {
                let r = (c.div_euclid(2)).clamp(0, vals.len() as i64 - 1);
                vals[r as usize]
            }
            _ => c as f64,
        }
    }

    pub fn denormalize_point(&self, p: &[i64]) -> Vec<f64> {
        p.iter()
            .enumerate()
            .map(|(i, &c)| self.denormalize_coord(i, c))
            .collect()
    }
}

/// Rank-normalizes raw boxes. On each axis endpoints are sorted by
/// (value, lo before hi, box index) and endpoint of rank `r` becomes `2r`.
///
/// Putting `lo` before `hi` on equal values keeps touching boxes such as
/// `[0,1]` and `[1,2]` intersecting after normalization.
pub fn normalize_instance(raw: &[RawBox]) -> Result<ProblemInstance> {
    if raw.is_empty() {
        return Err(usage("empty instance"));
    }
    let d = raw[0].lo.len();
    if d == 0 {
        return Err(usage("dimension must be at least 1"));
    }
    for (i, b) in raw.iter().enumerate() {
        if b.lo.len() != d || b.hi.len() != d {
            return Err(usage(format!("box {i} has inconsistent dimension")));
        }
        for a in 0..d {
            if !(b.lo[a].is_finite() && b.hi[a].is_finite()) {
                return Err(usage(format!("box {i} has a non-finite coordinate")));
            }
            if b.lo[a] > b.hi[a] {
                return Err(usage(format!("box {i} has lo > hi on axis {a}")));
            }
        }
    }
    let n = raw.len();
    let mut boxes = vec![BoxD::new(vec![0; d], vec![0; d]); n];
    let mut coordinate_map = Vec::with_capacity(d);
    for a in 0..d {
        let mut ends: Vec<(f64, u8, usize)> = Vec::with_capacity(2 * n);
        for (i, b) in raw.iter().enumerate() {
            ends.push((b.lo[a], 0, i));
            ends.push((b.hi[a], 1, i));
        }
        ends.sort_by(|x, y| {
            x.0.total_cmp(&y.0)
                .then(x.1.cmp(&y.1))
                .then(x.2.cmp(&y.2))
        });
        let mut vals = Vec::with_capacity(2 * n);
        for (r, &(v, side, i)) in ends.iter().enumerate() {
            let c = 2 * r as i64;
            if side == 0 {
                boxes[i].lo[a] = c;
            } else {
                boxes[i].hi[a] = c;
            }
            vals.push(v);
        }
        coordinate_map.push(vals);
    }
    Ok(ProblemInstance {
        dimension: d,
        boxes,
        coordinate_map,
    })
}

/// Normalizes boxes given with integer coordinates (no map needed by callers
/// that stay in integer space; the map still records the originals).
pub fn normalize_int_boxes(boxes: &[BoxD]) -> Result<ProblemInstance> {
    let raw: Vec<RawBox> = boxes
        .iter()
        .map(|b| {
            RawBox::new(
                b.lo.iter().map(|&x| x as f64).collect(),
                b.hi.iter().map(|&x| x as f64).collect(),
            )
        })
        .collect();
    normalize_instance(&raw)
}

pub const DEFAULT_VERTEX_CANDIDATE_CAP: u128 = 1 << 24;

/// Vertex set of the arrangement of `boxes`: all points `(c_0, ..., c_{d-1})`
/// where `c_i` is an axis-`i` endpoint of some box `b_i` and the point lies
/// in every `b_i` (hence on the corresponding facet of each).
///
/// Enumerates the candidate grid of endpoint coordinates, so refuses when
/// `(2n)^d` exceeds `cap`. Requires distinct endpoints per axis.
pub fn arrangement_vertices_of(boxes: &[BoxD], d: usize, cap: u128) -> Result<Vec<PointD>> {
    let n = boxes.len();
    let cand = (2 * n as u128).checked_pow(d as u32).unwrap_or(u128::MAX);
    if cand > cap {
        return Err(Error::CapExceeded(format!(
            "{cand} vertex candidates exceed cap {cap}"
        )));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    // per axis: (coordinate, owner), sorted
    let mut axes: Vec<Vec<(i64, usize)>> = Vec::with_capacity(d);
    for a in 0..d {
        let mut v: Vec<(i64, usize)> = Vec::with_capacity(2 * n);
        for (i, b) in boxes.iter().enumerate() {
            v.push((b.lo[a], i));
            v.push((b.hi[a], i));
        }
        v.sort_unstable();
        axes.push(v);
    }
    let mut out = Vec::new();
    let mut idx = vec![0usize; d];
    let mut p = vec![0i64; d];
    'outer: loop {
        for a in 0..d {
            p[a] = axes[a][idx[a]].0;
        }
        if (0..d).all(|a| boxes[axes[a][idx[a]].1].contains(&p)) {
            out.push(p.clone());
        }
        for a in (0..d).rev() {
            idx[a] += 1;
            if idx[a] < axes[a].len() {
                continue 'outer;
            }
            idx[a] = 0;
        }
        break;
    }
    Ok(out)
}

pub fn arrangement_vertices(inst: &ProblemInstance) -> Result<Vec<PointD>> {
    arrangement_vertices_of(&inst.boxes, inst.dimension, DEFAULT_VERTEX_CANDIDATE_CAP)
}

/// Indices of boxes containing none of `points`.
pub fn unpierced_indices(boxes: &[BoxD], points: &[PointD]) -> Vec<usize> {
    if boxes.is_empty() {
        return Vec::new();
    }
    let d = boxes[0].dim();
    if points.len() > 64 && boxes.len() > 64 {
        let tree = crate::range_tree::RangeTree::build(d, points.to_vec());
        return (0..boxes.len())
            .filter(|&i| !tree.any_in(&boxes[i]))
            .collect();
    }
    (0..boxes.len())
        .filter(|&i| !points.iter().any(|p| boxes[i].contains(p)))
        .collect()
}

/// Boxes of `inst` that no point of `sol` pierces; empty iff `sol` is a
/// piercing set.
pub fn verify_piercing(inst: &ProblemInstance, sol: &[PointD]) -> Vec<BoxD> {
    unpierced_indices(&inst.boxes, sol)
        .into_iter()
        .map(|i| inst.boxes[i].clone())
        .collect()
}

/// Same check on original coordinates.
pub fn verify_piercing_raw(boxes: &[RawBox], sol: &[Vec<f64>]) -> Vec<usize> {
    (0..boxes.len())
        .filter(|&i| !sol.iter().any(|p| boxes[i].contains(p)))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct PiercingSolution {
    pub points: Vec<PointD>,
    pub algorithm: String,
    pub seed: u64,
    pub stats: BTreeMap<String, u64>,
}

impl PiercingSolution {
    pub fn new(points: Vec<PointD>, algorithm: &str, seed: u64) -> Self {
        PiercingSolution {
            points,
            algorithm: algorithm.to_string(),
            seed,
            stats: BTreeMap::new(),
        }
    }

    pub fn size(&self) -> usize {
        self.points.len()
    }

    pub fn stat(&mut self, key: &str, v: u64) {
        self.stats.insert(key.to_string(), v);
    }

    pub fn bump(&mut self, key: &str, by: u64) {
        *self.stats.entry(key.to_string()).or_insert(0) += by;
    }
}

/// Removes duplicate points, keeping first occurrences.
pub fn dedup_points(points: &mut Vec<PointD>) {
    let mut seen = std::collections::HashSet::with_capacity(points.len());
    points.retain(|p| seen.insert(p.clone()));
}

/// Drops points whose removal keeps every box pierced, scanning from the
/// last point to the first.
pub fn prune_redundant(boxes: &[BoxD], points: &mut Vec<PointD>) {
    dedup_points(points);
    let m = points.len();
    if m <= 1 {
        return;
    }
    let mut hits: Vec<Vec<u32>> = vec![Vec::new(); m];
    let mut cover = vec![0u32; boxes.len()];
    for (bi, b) in boxes.iter().enumerate() {
        for (pi, p) in points.iter().enumerate() {
            if b.contains(p) {
                hits[pi].push(bi as u32);
                cover[bi] += 1;
            }
        }
    }
    let mut keep = vec![true; m];
    for pi in (0..m).rev() {
        if hits[pi].iter().all(|&b| cover[b as usize] >= 2) {
            keep[pi] = false;
            for &b in &hits[pi] {
                cover[b as usize] -= 1;
            }
        }
    }
    let mut it = keep.iter();
    points.retain(|_| *it.next().unwrap());
}

#[derive(Debug, Clone, Copy)]
pub struct ExactCap {
    pub max_boxes: usize,
    pub max_vertices: usize,
}

impl Default for ExactCap {
    fn default() -> Self {
        ExactCap {
            max_boxes: 40,
            max_vertices: 5000,
        }
    }
}

/// Minimum piercing set by branch-and-bound over arrangement vertices.
pub fn exact_piercing(inst: &ProblemInstance, cap: ExactCap) -> Result<PiercingSolution> {
    let n = inst.len();
    if n > cap.max_boxes || n > 128 {
        return Err(Error::CapExceeded(format!(
            "{n} boxes exceed exact cap {}",
            cap.max_boxes.min(128)
        )));
    }
    let mut sol = PiercingSolution::new(Vec::new(), "exact", 0);
    if n == 0 {
        return Ok(sol);
    }
    let verts = arrangement_vertices_of(&inst.boxes, inst.dimension, 1 << 26)?;
    if verts.len() > cap.max_vertices {
        return Err(Error::CapExceeded(format!(
            "{} vertices exceed exact cap {}",
            verts.len(),
            cap.max_vertices
        )));
    }
    let mut cands: Vec<(u128, usize)> = Vec::new();
    {
        let mut by_mask: std::collections::HashMap<u128, usize> = Default::default();
        for (vi, v) in verts.iter().enumerate() {
            let mut m = 0u128;
            for (bi, b) in inst.boxes.iter().enumerate() {
                if b.contains(v) {
                    m |= 1 << bi;
                }
            }
            by_mask.entry(m).or_insert(vi);
        }
        let mut all: Vec<(u128, usize)> = by_mask.into_iter().collect();
        all.sort_unstable_by_key(|&(m, vi)| (std::cmp::Reverse(m.count_ones()), vi));
        for (i, &(m, vi)) in all.iter().enumerate() {
            let dominated = all[..i].iter().any(|&(o, _)| o & m == m);
            if !dominated {
                cands.push((m, vi));
            }
        }
    }
    let mut inter = vec![0u128; n];
    for i in 0..n {
        for j in 0..n {
            if inst.boxes[i].intersects(&inst.boxes[j]) {
                inter[i] |= 1 << j;
            }
        }
    }
    // boxes with few neighbours first make the disjoint lower bound tighter
    let mut lb_order: Vec<usize> = (0..n).collect();
    lb_order.sort_by_key(|&i| inter[i].count_ones());
    let full: u128 = if n == 128 { u128::MAX } else { (1u128 << n) - 1 };

    // greedy upper bound
    let mut best: Vec<usize> = Vec::new();
    let mut covered = 0u128;
    while covered != full {
        let (ci, _) = cands
            .iter()
            .enumerate()
            .max_by_key(|(_, &(m, _))| (m & !covered).count_ones())
            .unwrap();
        best.push(ci);
        covered |= cands[ci].0;
    }

    struct Search<'a> {
        cands: &'a [(u128, usize)],
        inter: &'a [u128],
        lb_order: &'a [usize],
        full: u128,
        best: Vec<usize>,
        nodes: u64,
    }
    impl Search<'_> {
        fn lower_bound(&self, covered: u128) -> usize {
            let mut blocked = covered;
            let mut c = 0;
            for &i in self.lb_order {
                if blocked >> i & 1 == 0 {
                    c += 1;
                    blocked |= self.inter[i];
                }
            }
            c
        }
        fn go(&mut self, covered: u128, chosen: &mut Vec<usize>) {
            self.nodes += 1;
            if covered == self.full {
                if chosen.len() < self.best.len() {
                    self.best = chosen.clone();
                }
                return;
            }
            if chosen.len() + self.lower_bound(covered) >= self.best.len() {
                return;
            }
            let open = self.full & !covered;
            // branch on the open box with the fewest candidate vertices
            let mut pick = usize::MAX;
            let mut fewest = usize::MAX;
            let mut bits = open;
            while bits != 0 {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                let c = self.cands.iter().filter(|&&(m, _)| m >> i & 1 == 1).count();
                if c < fewest {
                    fewest = c;
                    pick = i;
                }
            }
            let mut options: Vec<(u128, usize)> = self
                .cands
                .iter()
                .enumerate()
                .filter(|(_, &(m, _))| m >> pick & 1 == 1)
                .map(|(ci, &(m, _))| (m & open, ci))
                .collect();
            options.sort_unstable_by_key(|&(m, ci)| (std::cmp::Reverse(m.count_ones()), ci));
            let mut kept: Vec<(u128, usize)> = Vec::with_capacity(options.len());
            for (m, ci) in options {
                if !kept.iter().any(|&(o, _)| o & m == m) {
                    kept.push((m, ci));
                }
            }
            for (m, ci) in kept {
                chosen.push(ci);
                self.go(covered | m, chosen);
                chosen.pop();
            }
        }
    }
    let mut s = Search {
        cands: &cands,
        inter: &inter,
        lb_order: &lb_order,
        full,
        best,
        nodes: 0,
    };
    s.go(0, &mut Vec::new());
    sol.points = s.best.iter().map(|&ci| verts[cands[ci].1].clone()).collect();
    sol.stat("bnb_nodes", s.nodes);
    sol.stat("vertices", verts.len() as u64);
    Ok(sol)
}

/// Size of a maximal pairwise-disjoint subfamily found greedily.
pub fn greedy_disjoint_count(boxes: &[BoxD]) -> usize {
    let mut chosen: Vec<&BoxD> = Vec::new();
    for b in boxes {
        if chosen.iter().all(|c| !c.intersects(b)) {
            chosen.push(b);
        }
    }
    chosen.len()
}
