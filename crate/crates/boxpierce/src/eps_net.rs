//! Weak ε-nets for boxes.
//!
//! The pipeline reduces the (possibly implicit) weighted point set to a
//! sample `Q` of `ρ = 2^h` points, replaces coordinates by ranks so the
//! sample lives on the grid `{1..ρ}^d`, and then pierces the heavy boxes:
//! a second random sample takes care of most of them, and every box it
//! misses is handled through a dyadic *witness* cell. Witness cells holding
//! many sample points contribute their corners; the others contribute a
//! sample point found inside a crate (a corner-anchored sub-box of the cell
//! with at most `k` points in its interior).
//!
//! In the plane there is also the box-independent construction from
//! [`canonical_rects_2d`] and [`pierce_heavy_family`].

use std::collections::{BTreeSet, HashSet};

use rand::distributions::{Distribution, WeightedIndex};
use rand::seq::SliceRandom;
use rand::Rng as _;

use crate::error::{invalid, usage, Error, Result};
use crate::geom::{BoxD, PointD};
use crate::range_tree::RangeTree;
use crate::rng::Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NetMode {
    /// Every net point is a sample point.
    Strong,
    /// Massive witness cells contribute their corners.
    Weak,
}

#[derive(Debug, Clone, Copy)]
pub struct NetConfig {
    /// Constant in the sample size `ρ ≈ α ε⁻¹ log ε⁻¹`.
    pub alpha: f64,
    /// Scales the second random sample (and `N₁` of [`pierce_heavy_family`]).
    pub net_sample_factor: f64,
    /// `None` picks strong mode for `d <= 3` and weak mode above.
    pub mode: Option<NetMode>,
}

impl Default for NetConfig {
    fn default() -> Self {
        NetConfig {
            alpha: 32.0,
            net_sample_factor: 1.0,
            mode: None,
        }
    }
}

impl NetConfig {
    pub fn mode_for(&self, d: usize) -> NetMode {
        self.mode
            .unwrap_or(if d <= 3 { NetMode::Strong } else { NetMode::Weak })
    }
}

fn check_eps(eps: f64) -> Result<()> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(usage(format!("epsilon must lie in (0, 1), got {eps}")));
    }
    Ok(())
}

fn loglog(eps: f64) -> f64 {
    (1.0 / eps).log2().max(1.0).log2().max(1.0)
}

/// `ρ`: the next power of two at or above `α ε⁻¹ max(1, log2 ε⁻¹)`.
pub fn sample_size(eps: f64, alpha: f64) -> usize {
    let inv = 1.0 / eps;
    let raw = (alpha * inv * inv.log2().max(1.0)).ceil().max(1.0);
    (raw as usize).next_power_of_two()
}

/// Number of random net points `factor · ε⁻¹ · max(1, log2 log2 ε⁻¹)`.
pub fn second_sample_size(eps: f64, factor: f64) -> usize {
    (factor * loglog(eps) / eps).ceil().max(1.0) as usize
}

/// `ρ` draws from `draw`, i.i.d. with repetition.
pub fn sample_reduce<F>(mut draw: F, eps: f64, alpha: f64, rng: &mut Rng) -> Result<Vec<PointD>>
where
    F: FnMut(&mut Rng) -> Result<PointD>,
{
    check_eps(eps)?;
    let rho = sample_size(eps, alpha);
    (0..rho).map(|_| draw(rng)).collect()
}

/// [`sample_reduce`] for an explicit weighted point set.
pub fn sample_reduce_weighted(
    points: &[PointD],
    weights: &[f64],
    eps: f64,
    alpha: f64,
    rng: &mut Rng,
) -> Result<Vec<PointD>> {
    check_eps(eps)?;
    if points.len() != weights.len() {
        return Err(usage("points and weights differ in length"));
    }
    let dist = WeightedIndex::new(weights).map_err(|_| Error::ZeroWeight)?;
    sample_reduce(|r| Ok(points[dist.sample(r)].clone()), eps, alpha, rng)
}

/// The rank image of a sample.
#[derive(Debug, Clone)]
pub struct GridContext {
    pub d: usize,
    /// `ρ`, the number of sample points.
    pub rho: usize,
    /// `log2 ρ` (rounded up when `ρ` is not a power of two).
    pub h: u32,
    /// Gridified points, coordinates in `1..=ρ`.
    pub x: Vec<PointD>,
    /// `vals[a][r - 1]` is the sample value of rank `r` on axis `a`.
    pub vals: Vec<Vec<i64>>,
    tree: RangeTree,
}

/// Replaces every coordinate by its rank; ties are broken by point index.
pub fn gridify(q: &[PointD]) -> Result<GridContext> {
    if q.is_empty() {
        return Err(usage("cannot gridify an empty sample"));
    }
    let d = q[0].len();
    let rho = q.len();
    let mut x = vec![vec![0i64; d]; rho];
    let mut vals = Vec::with_capacity(d);
    for a in 0..d {
        let mut order: Vec<usize> = (0..rho).collect();
        order.sort_by_key(|&i| (q[i][a], i));
        for (r, &i) in order.iter().enumerate() {
            x[i][a] = r as i64 + 1;
        }
        vals.push(order.iter().map(|&i| q[i][a]).collect());
    }
    let tree = RangeTree::build(d, x.clone());
    Ok(GridContext {
        d,
        rho,
        h: rho.next_power_of_two().trailing_zeros(),
        x,
        vals,
        tree,
    })
}

impl GridContext {
    /// The rank box `G(b)` with `|b ∩ Q| = |G(b) ∩ X|`; `None` when some
    /// axis of `b` holds no sample value.
    pub fn rank_box(&self, b: &BoxD) -> Option<BoxD> {
        let mut lo = Vec::with_capacity(self.d);
        let mut hi = Vec::with_capacity(self.d);
        for a in 0..self.d {
            let v = &self.vals[a];
            let r1 = v.partition_point(|&c| c < b.lo[a]) as i64 + 1;
            let r2 = v.partition_point(|&c| c <= b.hi[a]) as i64;
            if r1 > r2 {
                return None;
            }
            lo.push(r1);
            hi.push(r2);
        }
        Some(BoxD::new(lo, hi))
    }

    /// Original value of rank `r` on `axis` (ranks outside `1..=ρ` clamp).
    pub fn value(&self, axis: usize, r: i64) -> i64 {
        let i = (r.clamp(1, self.rho as i64) - 1) as usize;
        self.vals[axis][i]
    }

    pub fn point_value(&self, p: &[i64]) -> PointD {
        (0..self.d).map(|a| self.value(a, p[a])).collect()
    }

    /// Number of gridified points in `b` (rank coordinates).
    pub fn count(&self, b: &BoxD) -> u64 {
        self.tree.count(b)
    }

    /// Number of gridified points strictly inside `b`.
    pub fn count_interior(&self, b: &BoxD) -> u64 {
        let lo: Vec<i64> = b.lo.iter().map(|&c| c + 1).collect();
        let hi: Vec<i64> = b.hi.iter().map(|&c| c - 1).collect();
        if (0..self.d).any(|a| lo[a] > hi[a]) {
            return 0;
        }
        self.tree.count(&BoxD::new(lo, hi))
    }

    pub fn points_in(&self, b: &BoxD) -> Vec<PointD> {
        self.tree.report(b).into_iter().map(|(p, _)| p).collect()
    }

    pub fn first_in(&self, b: &BoxD) -> Option<PointD> {
        self.tree.first_in(b)
    }

    /// The bounding cube `[0, 2^h]^d` of the grid hierarchy.
    pub fn root(&self) -> GridBoxId {
        GridBoxId {
            level: vec![self.h; self.d],
            index: vec![0; self.d],
        }
    }
}

/// Cell `index` of the grid whose cells have side `2^level[a]` on axis `a`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GridBoxId {
    pub level: Vec<u32>,
    pub index: Vec<i64>,
}

impl GridBoxId {
    pub fn cell(&self) -> BoxD {
        let lo: Vec<i64> = (0..self.level.len())
            .map(|a| self.index[a] << self.level[a])
            .collect();
        let hi: Vec<i64> = (0..self.level.len())
            .map(|a| lo[a] + (1i64 << self.level[a]))
            .collect();
        BoxD::new(lo, hi)
    }
}

fn intersect(a: &BoxD, b: &BoxD) -> Option<BoxD> {
    let d = a.dim();
    let lo: Vec<i64> = (0..d).map(|i| a.lo[i].max(b.lo[i])).collect();
    let hi: Vec<i64> = (0..d).map(|i| a.hi[i].min(b.hi[i])).collect();
    if (0..d).any(|i| lo[i] > hi[i]) {
        None
    } else {
        Some(BoxD::new(lo, hi))
    }
}

/// Halving walk from the root cell; `b` is in rank coordinates.
pub fn witness_walk(ctx: &GridContext, b: &BoxD) -> GridBoxId {
    let mut id = ctx.root();
    for a in 0..ctx.d {
        loop {
            let cell = id.cell();
            if id.level[a] == 0 {
                break;
            }
            let mid = cell.lo[a] + (1i64 << (id.level[a] - 1));
            let mut left = id.clone();
            left.level[a] -= 1;
            left.index[a] *= 2;
            let mut right = left.clone();
            right.index[a] += 1;
            if b.hi[a] < mid {
                id = left;
            } else if b.lo[a] > mid {
                id = right;
            } else {
                let cl = intersect(b, &left.cell()).map_or(0, |q| ctx.count(&q));
                let cr = intersect(b, &right.cell()).map_or(0, |q| ctx.count(&q));
                id = if cl >= cr { left } else { right };
                break;
            }
        }
    }
    id
}

/// Witness cell for a box holding at least `(ε/2)ρ` sample points.
pub fn find_witness(ctx: &GridContext, b: &BoxD, eps: f64) -> Result<GridBoxId> {
    let c = ctx.count(b) as f64;
    if c < eps / 2.0 * ctx.rho as f64 {
        return Err(invalid(format!(
            "box holds {c} sample points, below (eps/2)·rho = {}",
            eps / 2.0 * ctx.rho as f64
        )));
    }
    Ok(witness_walk(ctx, b))
}

/// A corner of `cell` inside `b`, when there is one.
pub fn corner_inside(b: &BoxD, cell: &BoxD) -> Option<PointD> {
    (0..b.dim())
        .map(|a| {
            if b.lo[a] <= cell.lo[a] && cell.lo[a] <= b.hi[a] {
                Some(cell.lo[a])
            } else if b.lo[a] <= cell.hi[a] && cell.hi[a] <= b.hi[a] {
                Some(cell.hi[a])
            } else {
                None
            }
        })
        .collect()
}

/// Checks the witness guarantees: `b` and the cell contain a corner of each
/// other, and the cell keeps at least a `2^{-d}` share of `b`'s points.
pub fn witness_holds(ctx: &GridContext, b: &BoxD, id: &GridBoxId) -> bool {
    let cell = id.cell();
    let share = intersect(b, &cell).map_or(0, |q| ctx.count(&q));
    corner_inside(b, &cell).is_some()
        && corner_inside(&cell, b).is_some()
        && share << ctx.d >= ctx.count(b)
}

/// Maximal box anchored at a cell corner with at most `k` points in its
/// interior.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Crate {
    pub anchor: PointD,
    pub bounds: BoxD,
    pub interior: usize,
}

fn corners(cell: &BoxD) -> Vec<PointD> {
    let d = cell.dim();
    (0..1usize << d)
        .map(|m| {
            (0..d)
                .map(|a| if m >> a & 1 == 0 { cell.lo[a] } else { cell.hi[a] })
                .collect()
        })
        .collect()
}

fn anchored_box(v: &[i64], cell: &BoxD, ext: &[i64]) -> BoxD {
    let d = v.len();
    let mut lo = vec![0; d];
    let mut hi = vec![0; d];
    for a in 0..d {
        if v[a] == cell.lo[a] {
            lo[a] = v[a];
            hi[a] = v[a] + ext[a];
        } else {
            lo[a] = v[a] - ext[a];
            hi[a] = v[a];
        }
    }
    BoxD::new(lo, hi)
}

/// All k-crates of `cell` over every corner, deduplicated by extent.
pub fn enumerate_kcrates(cell_points: &[PointD], cell: &BoxD, k: usize) -> Vec<Crate> {
    let d = cell.dim();
    let width: Vec<i64> = (0..d).map(|a| cell.hi[a] - cell.lo[a]).collect();
    let mut seen: BTreeSet<BoxD> = BTreeSet::new();
    let mut out = Vec::new();
    for v in corners(cell) {
        let dist: Vec<Vec<i64>> = cell_points
            .iter()
            .map(|p| (0..d).map(|a| (p[a] - v[a]).abs()).collect())
            .collect();
        let cands: Vec<Vec<i64>> = (0..d)
            .map(|a| {
                let mut c: Vec<i64> = dist
                    .iter()
                    .map(|q| q[a])
                    .filter(|&x| x > 0 && x < width[a])
                    .collect();
                c.push(width[a]);
                c.sort_unstable();
                c.dedup();
                c
            })
            .collect();
        let mut ext = vec![0i64; d];
        crate_rec(&dist, &cands, &width, k, 0, &mut ext, &mut |ext, interior| {
            let b = anchored_box(&v, cell, ext);
            if seen.insert(b.clone()) {
                out.push(Crate {
                    anchor: v.clone(),
                    bounds: b,
                    interior,
                });
            }
        });
    }
    out
}

fn inside_open(q: &[i64], ext: &[i64], skip: usize) -> bool {
    (0..q.len()).all(|a| a == skip || (q[a] > 0 && q[a] < ext[a]))
}

fn crate_rec(
    dist: &[Vec<i64>],
    cands: &[Vec<i64>],
    width: &[i64],
    k: usize,
    a: usize,
    ext: &mut Vec<i64>,
    emit: &mut dyn FnMut(&[i64], usize),
) {
    let d = width.len();
    if a + 1 < d {
        for &e in &cands[a] {
            ext[a] = e;
            crate_rec(dist, cands, width, k, a + 1, ext, emit);
        }
        return;
    }
    // the last extent is forced: stop right at the (k+1)-th point
    let last = d - 1;
    let mut ys: Vec<i64> = dist
        .iter()
        .filter(|q| (0..last).all(|b| q[b] > 0 && q[b] < ext[b]) && q[last] > 0)
        .map(|q| q[last])
        .collect();
    ys.sort_unstable();
    ext[last] = if ys.len() > k { ys[k].min(width[last]) } else { width[last] };
    let interior = dist.iter().filter(|q| inside_open(q, ext, usize::MAX)).count();
    if interior > k {
        return;
    }
    for b in 0..last {
        if ext[b] < width[b] {
            let grown = dist
                .iter()
                .filter(|q| inside_open(q, ext, b) && q[b] > 0 && q[b] <= ext[b])
                .count();
            if grown <= k {
                return;
            }
        }
    }
    emit(ext, interior);
}

/// A crate of the witness cell inside `b ∩ cell`, found by binary search on
/// the first axis; the anchor is the corner `v` of the cell inside `b`.
fn crate_in_box(ctx: &GridContext, cell: &BoxD, v: &[i64], bc: &BoxD, k: u64) -> BoxD {
    let d = ctx.d;
    let mut ext: Vec<i64> = (0..d).map(|a| bc.hi[a] - bc.lo[a]).collect();
    if ctx.count_interior(&anchored_box(v, cell, &ext)) <= k {
        return bc.clone();
    }
    for a in 0..d {
        let (mut lo, mut hi) = (0i64, ext[a]);
        // invariant: interior(lo) <= k < interior(hi)
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            ext[a] = mid;
            if ctx.count_interior(&anchored_box(v, cell, &ext)) <= k {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        ext[a] = lo;
        if ctx.count_interior(&anchored_box(v, cell, &ext)) <= k {
            break;
        }
    }
    anchored_box(v, cell, &ext)
}

/// Telemetry of one net construction.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NetStats {
    pub rho: usize,
    pub second_sample: usize,
    pub witnesses: usize,
    pub massive_cells: usize,
    pub crates: usize,
    pub fixups: usize,
}

#[derive(Debug, Clone)]
pub struct NetOutcome {
    pub points: Vec<PointD>,
    pub stats: NetStats,
}

/// Massive-cell threshold `h^{d+2}`.
pub fn massive_threshold(h: u32, d: usize) -> u64 {
    (h.max(1) as u64).saturating_pow(d as u32 + 2)
}

/// Crate parameter `⌈(ε / 2^{d+1}) ρ⌉`.
pub fn crate_parameter(eps: f64, d: usize, rho: usize) -> u64 {
    (eps / (1u64 << (d + 1)) as f64 * rho as f64).ceil() as u64
}

/// Weak ε-net for `boxes`, each assumed ε-heavy for the distribution behind
/// `draw`. The result pierces every box whenever every box received at
/// least one sample point; otherwise a sampling failure is reported.
pub fn weak_net_for_boxes<F>(
    draw: F,
    eps: f64,
    boxes: &[BoxD],
    cfg: &NetConfig,
    rng: &mut Rng,
) -> Result<NetOutcome>
where
    F: FnMut(&mut Rng) -> Result<PointD>,
{
    check_eps(eps)?;
    if boxes.is_empty() {
        return Ok(NetOutcome {
            points: Vec::new(),
            stats: NetStats::default(),
        });
    }
    if boxes.len() as f64 <= 1.0 / eps {
        let mut points: Vec<PointD> = boxes.iter().map(|b| b.lo.clone()).collect();
        crate::geom::dedup_points(&mut points);
        return Ok(NetOutcome {
            points,
            stats: NetStats::default(),
        });
    }
    let q = sample_reduce(draw, eps, cfg.alpha, rng)?;
    weak_net_from_sample(&q, eps, boxes, cfg, rng)
}

/// The part of [`weak_net_for_boxes`] after the first sample was drawn.
pub fn weak_net_from_sample(
    q: &[PointD],
    eps: f64,
    boxes: &[BoxD],
    cfg: &NetConfig,
    rng: &mut Rng,
) -> Result<NetOutcome> {
    check_eps(eps)?;
    let ctx = gridify(q)?;
    let d = ctx.d;
    let mode = cfg.mode_for(d);
    let mut stats = NetStats {
        rho: ctx.rho,
        ..NetStats::default()
    };
    let mut ranked = Vec::with_capacity(boxes.len());
    for (i, b) in boxes.iter().enumerate() {
        match ctx.rank_box(b) {
            Some(g) if ctx.count(&g) > 0 => ranked.push(g),
            _ => return Err(Error::SamplingFailure(format!("box {i} received no sample point"))),
        }
    }
    let mut net_tree = RangeTree::new(d);
    let mut net: Vec<PointD> = Vec::new();
    let n2 = second_sample_size(eps, cfg.net_sample_factor).min(ctx.rho);
    stats.second_sample = n2;
    for _ in 0..n2 {
        let p = ctx.x[rng.gen_range(0..ctx.rho)].clone();
        net_tree.insert(p.clone());
        net.push(p);
    }
    let k = crate_parameter(eps, d, ctx.rho);
    let massive = massive_threshold(ctx.h, d);
    let mut used_cells: HashSet<GridBoxId> = HashSet::new();
    let mut used_crates: HashSet<BoxD> = HashSet::new();
    for g in &ranked {
        if net_tree.any_in(g) {
            continue;
        }
        stats.witnesses += 1;
        let id = witness_walk(&ctx, g);
        let cell = id.cell();
        if mode == NetMode::Weak && ctx.count(&cell) >= massive {
            if used_cells.insert(id.clone()) {
                stats.massive_cells += 1;
                for c in corners(&cell) {
                    net_tree.insert(c.clone());
                    net.push(c);
                }
            }
            if net_tree.any_in(g) {
                continue;
            }
        }
        let picked = match (corner_inside(g, &cell), intersect(g, &cell)) {
            (Some(v), Some(bc)) => {
                let cr = crate_in_box(&ctx, &cell, &v, &bc, k);
                let p = ctx.first_in(&cr).or_else(|| ctx.first_in(&bc));
                if p.is_some() && used_crates.insert(cr) {
                    stats.crates += 1;
                }
                p
            }
            _ => None,
        };
        let p = match picked {
            Some(p) => p,
            None => {
                stats.fixups += 1;
                ctx.first_in(g).expect("box has sample points")
            }
        };
        net_tree.insert(p.clone());
        net.push(p);
    }
    let mut points: Vec<PointD> = net.iter().map(|p| ctx.point_value(p)).collect();
    crate::geom::dedup_points(&mut points);
    // rank piercing implies value piercing; this only guards the invariant
    let missed = crate::geom::unpierced_indices(boxes, &points);
    for i in missed {
        stats.fixups += 1;
        points.push(ctx.point_value(&ctx.first_in(&ranked[i]).unwrap()));
    }
    Ok(NetOutcome { points, stats })
}

struct Fenwick {
    t: Vec<u32>,
}

impl Fenwick {
    fn new(n: usize) -> Self {
        Fenwick { t: vec![0; n + 1] }
    }
    fn add(&mut self, i: usize) {
        let mut i = i + 1;
        while i < self.t.len() {
            self.t[i] += 1;
            i += i & i.wrapping_neg();
        }
    }
    /// Smallest position whose prefix count reaches `k` (1-based `k`).
    fn kth(&self, mut k: u32) -> usize {
        let mut pos = 0;
        let mut step = (self.t.len() - 1).next_power_of_two();
        while step > 0 {
            if pos + step < self.t.len() && self.t[pos + step] < k {
                pos += step;
                k -= self.t[pos];
            }
            step >>= 1;
        }
        pos
    }
}

/// Staircase members for points in a quadrant anchored at the x-line and
/// the y-line; `pts` is sorted by distance from the x-line.
fn staircase(pts: &[PointD], k: usize, x_up: bool, y_up: bool, out: &mut BTreeSet<BoxD>) {
    if pts.len() < k {
        return;
    }
    let mut ys: Vec<i64> = pts.iter().map(|p| p[1]).collect();
    ys.sort_unstable();
    if !y_up {
        ys.reverse();
    }
    let pos = |y: i64| -> usize {
        if y_up {
            ys.binary_search(&y).unwrap()
        } else {
            ys.binary_search_by(|v| y.cmp(v)).unwrap()
        }
    };
    let near_x = pts[0][0];
    let near_y = ys[0];
    let mut fw = Fenwick::new(pts.len());
    for (t, p) in pts.iter().enumerate() {
        fw.add(pos(p[1]));
        if t + 1 >= k {
            let yk = ys[fw.kth(k as u32)];
            let (x0, x1) = if x_up { (near_x, p[0]) } else { (p[0], near_x) };
            let (y0, y1) = if y_up { (near_y, yk) } else { (yk, near_y) };
            out.insert(BoxD::new(vec![x0, y0], vec![x1, y1]));
        }
    }
}

fn anchored_rec(side: &mut [PointD], k: usize, x_up: bool, out: &mut BTreeSet<BoxD>) {
    if side.len() < 2 * k.max(1) {
        return;
    }
    side.sort_by_key(|p| p[1]);
    let mid = side.len() / 2;
    let (lower, upper) = side.split_at_mut(mid);
    for (part, y_up) in [(&mut *lower, false), (&mut *upper, true)] {
        let mut by_x = part.to_vec();
        by_x.sort_by_key(|p| if x_up { p[0] } else { -p[0] });
        staircase(&by_x, k, x_up, y_up, out);
    }
    anchored_rec(lower, k, x_up, out);
    anchored_rec(upper, k, x_up, out);
}

fn canonical_rec(pts: &mut [PointD], k: usize, out: &mut BTreeSet<BoxD>) {
    if pts.len() < 4 * k {
        return;
    }
    pts.sort_by_key(|p| p[0]);
    let mid = pts.len() / 2;
    let (left, right) = pts.split_at_mut(mid);
    anchored_rec(&mut left.to_vec(), k, false, out);
    anchored_rec(&mut right.to_vec(), k, true, out);
    canonical_rec(left, k, out);
    canonical_rec(right, k, out);
}

/// Rectangles holding exactly `k` points of `x` each, such that every
/// rectangle holding at least `4k` points of `x` contains one of them.
///
/// Points must have distinct coordinates per axis (a gridified set does).
/// The family has `O(ρ log² ρ)` members.
pub fn canonical_rects_2d(x: &[PointD], k: usize) -> Result<Vec<BoxD>> {
    if k == 0 {
        return Err(usage("canonical rectangles need k >= 1"));
    }
    if x.iter().any(|p| p.len() != 2) {
        return Err(usage("canonical rectangles are planar"));
    }
    let mut pts = x.to_vec();
    let mut out = BTreeSet::new();
    canonical_rec(&mut pts, k, &mut out);
    Ok(out.into_iter().collect())
}

/// Pierces every member of `family` with points of `x`: a random set `N₁`
/// followed by one extra point for each member it misses. In strengthened
/// mode members are topped up until they hold `max(1, ⌈log2 log2 ε⁻¹⌉)`
/// net points.
pub fn pierce_heavy_family(
    x: &[PointD],
    family: &[BoxD],
    eps: f64,
    factor: f64,
    strengthened: bool,
    rng: &mut Rng,
) -> Result<Vec<PointD>> {
    check_eps(eps)?;
    if family.is_empty() {
        return Ok(Vec::new());
    }
    let d = family[0].dim();
    let tree = RangeTree::build(d, x.to_vec());
    let mut net_tree = RangeTree::new(d);
    let mut net: Vec<PointD> = Vec::new();
    let mut taken: HashSet<PointD> = HashSet::new();
    if !x.is_empty() {
        for _ in 0..second_sample_size(eps, factor) {
            let p = x[rng.gen_range(0..x.len())].clone();
            if taken.insert(p.clone()) {
                net_tree.insert(p.clone());
                net.push(p);
            }
        }
    }
    let need = if strengthened { loglog(eps).ceil() as u64 } else { 1 };
    for (i, f) in family.iter().enumerate() {
        let have = net_tree.count(f);
        if have >= need {
            continue;
        }
        let mut inside: Vec<PointD> = tree.report(f).into_iter().map(|(p, _)| p).collect();
        if inside.is_empty() {
            return Err(invalid(format!("family member {i} holds no point")));
        }
        inside.retain(|p| !taken.contains(p));
        inside.shuffle(rng);
        for p in inside.into_iter().take((need - have) as usize) {
            taken.insert(p.clone());
            net_tree.insert(p.clone());
            net.push(p);
        }
    }
    Ok(net)
}

/// Planar weak ε-net for every rectangle heavy in the sample: canonical
/// rectangles with `k = ⌊ερ/8⌋` followed by [`pierce_heavy_family`].
/// Returns points in sample coordinates.
pub fn weak_net_2d(q: &[PointD], eps: f64, factor: f64, rng: &mut Rng) -> Result<Vec<PointD>> {
    let ctx = gridify(q)?;
    let k = ((eps * ctx.rho as f64) / 8.0).floor() as usize;
    let net = if k == 0 {
        ctx.x.clone()
    } else {
        let fam = canonical_rects_2d(&ctx.x, k)?;
        pierce_heavy_family(&ctx.x, &fam, eps, factor, false, rng)?
    };
    Ok(net.iter().map(|p| ctx.point_value(p)).collect())
}
