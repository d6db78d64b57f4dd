//! Implicit weighted vertex set of a box arrangement.
//!
//! The vertices of the arrangement of the *active* boxes carry doubling
//! weights `2^{#update boxes containing the vertex}`. The structure never
//! lists the vertices. Space is cut into cells, the cells hang off a balanced
//! tree, and inside a cell every relevant box behaves like a pile: it covers
//! the cell's candidate coordinates on all axes but at most one. The weight
//! of a cell then factors into one lazy segment tree per axis.
//!
//! All cuts happen at odd coordinates while box endpoints are even, so no
//! vertex ever lies on a cell boundary.
//!
//! Construction proceeds level by level. At level `t` a region is cut along
//! axis `t` just outside both axis-`t` endpoints of every box that is partial
//! on an earlier axis, and further so that no piece holds more than about
//! `sqrt(n)` axis-`t` endpoints. The final regions are refined until the
//! pile condition holds with respect to their candidate coordinates.

use crate::error::{invalid, usage, Error, Result};
use crate::geom::{BoxD, PointD};
use crate::rng::Rng;
use crate::segtree::{close, pick_weighted, LazySegTree};
use crate::weight::Weight;

use rand::seq::SliceRandom;
use rand::Rng as _;

pub const MAX_DIM: usize = 4;
const NONE: u32 = u32::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Region {
    lo: [i64; MAX_DIM],
    hi: [i64; MAX_DIM],
}

impl Region {
    fn to_box(&self, d: usize) -> BoxD {
        BoxD::new(self.lo[..d].to_vec(), self.hi[..d].to_vec())
    }
}

#[derive(Clone, Debug)]
struct Node<W: Weight> {
    region: Region,
    kids: [u32; 2],
    leaf: u32,
    lambda: i64,
    omega: W,
}

#[derive(Clone, Debug)]
struct Leaf<W: Weight> {
    /// One tree per axis over the candidate coordinates; empty when the cell
    /// can never hold a vertex.
    trees: Vec<LazySegTree<W>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Cover {
    All,
    Part,
    Nil,
}

/// Size figures of a built structure.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PartitionStats {
    pub nodes: usize,
    pub cells: usize,
    pub vertex_cells: usize,
    pub refine_cuts: usize,
    pub depth: usize,
    pub max_candidates: usize,
}

#[derive(Clone, Debug)]
pub struct ArrangementDs<W: Weight> {
    d: usize,
    boxes: Vec<BoxD>,
    active: Vec<bool>,
    mult: Vec<u32>,
    nodes: Vec<Node<W>>,
    leaves: Vec<Leaf<W>>,
    root: u32,
    stats: PartitionStats,
    slab: usize,
}

#[inline]
fn overlaps(b: &BoxD, r: &Region, d: usize) -> bool {
    (0..d).all(|i| b.lo[i] < r.hi[i] && b.hi[i] > r.lo[i])
}

/// `b` contains every integer point strictly inside `r` on axis `i`.
#[inline]
fn covers_axis(b: &BoxD, r: &Region, i: usize) -> bool {
    b.lo[i] <= r.lo[i] + 1 && b.hi[i] >= r.hi[i] - 1
}

#[inline]
fn covers(b: &BoxD, r: &Region, d: usize) -> bool {
    (0..d).all(|i| covers_axis(b, r, i))
}

#[inline]
fn inside(x: i64, r: &Region, i: usize) -> bool {
    r.lo[i] < x && x < r.hi[i]
}

fn has_endpoint_inside(b: &BoxD, r: &Region, d: usize) -> bool {
    (0..d).any(|i| inside(b.lo[i], r, i) || inside(b.hi[i], r, i))
}

fn classify(z: &[i64], lo: i64, hi: i64) -> Cover {
    let l = z.partition_point(|&x| x < lo);
    let r = z.partition_point(|&x| x <= hi);
    let c = r.saturating_sub(l);
    if c == 0 {
        Cover::Nil
    } else if c == z.len() {
        Cover::All
    } else {
        Cover::Part
    }
}

impl<W: Weight> ArrangementDs<W> {
    /// Builds the structure over a universe of boxes with distinct even
    /// endpoints per axis. All boxes start inactive and no box is doubled.
    pub fn build(d: usize, boxes: Vec<BoxD>) -> Result<Self> {
        if d == 0 || d > MAX_DIM {
            return Err(usage(format!("arrangement dimension must be in 1..={MAX_DIM}")));
        }
        for b in &boxes {
            if b.dim() != d {
                return Err(usage("box dimension differs from structure dimension"));
            }
        }
        for a in 0..d {
            let mut v: Vec<i64> = boxes.iter().flat_map(|b| [b.lo[a], b.hi[a]]).collect();
            if v.iter().any(|x| x.rem_euclid(2) != 0) {
                return Err(usage("endpoints must be even; normalize the instance first"));
            }
            v.sort_unstable();
            if v.windows(2).any(|w| w[0] == w[1]) {
                return Err(usage("endpoints must be distinct per axis"));
            }
            if boxes.iter().any(|b| b.lo[a] >= b.hi[a]) {
                return Err(usage("boxes must have positive width"));
            }
        }
        let n = boxes.len();
        let mut region = Region {
            lo: [0; MAX_DIM],
            hi: [0; MAX_DIM],
        };
        for a in 0..d {
            region.lo[a] = boxes.iter().map(|b| b.lo[a]).min().unwrap_or(0) - 1;
            region.hi[a] = boxes.iter().map(|b| b.hi[a]).max().unwrap_or(0) + 1;
        }
        let slab = ((n as f64).sqrt().ceil() as usize).max(1);
        let mut ds = ArrangementDs {
            d,
            active: vec![false; n],
            mult: vec![0; n],
            boxes,
            nodes: Vec::new(),
            leaves: Vec::new(),
            root: 0,
            stats: PartitionStats::default(),
            slab,
        };
        let all: Vec<u32> = (0..n as u32).collect();
        ds.root = ds.build_level(region, 0, all, 1);
        ds.stats.nodes = ds.nodes.len();
        Ok(ds)
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn universe(&self) -> &[BoxD] {
        &self.boxes
    }

    pub fn stats(&self) -> PartitionStats {
        self.stats
    }

    pub fn is_active(&self, idx: usize) -> bool {
        self.active[idx]
    }

    pub fn multiplicity(&self, idx: usize) -> u32 {
        self.mult[idx]
    }

    fn new_node(&mut self, region: Region, kids: [u32; 2], leaf: u32) -> u32 {
        self.nodes.push(Node {
            region,
            kids,
            leaf,
            lambda: 0,
            omega: W::zero(),
        });
        self.nodes.len() as u32 - 1
    }

    fn empty_leaf(&mut self, region: Region, depth: usize) -> u32 {
        self.stats.cells += 1;
        self.stats.depth = self.stats.depth.max(depth);
        self.leaves.push(Leaf { trees: Vec::new() });
        let l = self.leaves.len() as u32 - 1;
        self.new_node(region, [NONE, NONE], l)
    }

    /// Balanced binary tree over consecutive pieces of a region.
    fn join(&mut self, kids: &[u32]) -> u32 {
        if kids.len() == 1 {
            return kids[0];
        }
        let mid = kids.len() / 2;
        let a = self.join(&kids[..mid]);
        let b = self.join(&kids[mid..]);
        let ra = self.nodes[a as usize].region;
        let rb = self.nodes[b as usize].region;
        let mut r = ra;
        for i in 0..self.d {
            r.lo[i] = ra.lo[i].min(rb.lo[i]);
            r.hi[i] = ra.hi[i].max(rb.hi[i]);
        }
        self.new_node(r, [a, b], NONE)
    }

    fn endpoints_inside(&self, cand: &[u32], r: &Region, axis: usize) -> Vec<i64> {
        let mut v: Vec<i64> = Vec::new();
        for &b in cand {
            let b = &self.boxes[b as usize];
            for x in [b.lo[axis], b.hi[axis]] {
                if inside(x, r, axis) {
                    v.push(x);
                }
            }
        }
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Splits `r` along `axis` at the given odd cuts and distributes the
    /// boxes that matter to each piece.
    fn split(&self, r: &Region, axis: usize, cuts: &[i64], cand: &[u32]) -> Vec<(Region, Vec<u32>)> {
        let mut bounds = vec![r.lo[axis]];
        bounds.extend_from_slice(cuts);
        bounds.push(r.hi[axis]);
        let k = bounds.len() - 1;
        let mut pieces: Vec<(Region, Vec<u32>)> = (0..k)
            .map(|j| {
                let mut p = *r;
                p.lo[axis] = bounds[j];
                p.hi[axis] = bounds[j + 1];
                (p, Vec::new())
            })
            .collect();
        for &bi in cand {
            let b = &self.boxes[bi as usize];
            // pieces j with bounds[j] < b.hi and bounds[j+1] > b.lo
            let first = bounds[1..].partition_point(|&x| x < b.lo[axis]);
            let last = bounds[..k].partition_point(|&x| x < b.hi[axis]);
            for j in first..last.min(k) {
                let p = &pieces[j].0;
                if covers(b, p, self.d) && !has_endpoint_inside(b, p, self.d) {
                    continue;
                }
                pieces[j].1.push(bi);
            }
        }
        pieces
    }

    fn build_level(&mut self, r: Region, level: usize, cand: Vec<u32>, depth: usize) -> u32 {
        let d = self.d;
        let coords: Vec<Vec<i64>> = (0..d).map(|a| self.endpoints_inside(&cand, &r, a)).collect();
        if coords.iter().any(|c| c.is_empty()) {
            return self.empty_leaf(r, depth);
        }
        if level == d {
            return self.refine(r, cand, depth);
        }
        let t = level;
        let mut cuts: Vec<i64> = Vec::new();
        for &bi in &cand {
            let b = &self.boxes[bi as usize];
            let partial_before = (0..t).any(|j| !covers_axis(b, &r, j));
            if partial_before {
                for x in [b.lo[t] - 1, b.hi[t] + 1] {
                    if inside(x, &r, t) {
                        cuts.push(x);
                    }
                }
            }
        }
        cuts.sort_unstable();
        cuts.dedup();
        // count cuts between the critical ones
        let mut all_cuts = Vec::with_capacity(cuts.len() + coords[t].len() / self.slab + 1);
        let mut ci = 0;
        let mut run = 0;
        for &c in &coords[t] {
            while ci < cuts.len() && cuts[ci] < c {
                all_cuts.push(cuts[ci]);
                ci += 1;
                run = 0;
            }
            run += 1;
            if run == self.slab && inside(c + 1, &r, t) {
                let next_crit = cuts.get(ci).copied();
                if next_crit != Some(c + 1) {
                    all_cuts.push(c + 1);
                }
                run = 0;
            }
        }
        all_cuts.extend_from_slice(&cuts[ci..]);
        all_cuts.dedup();
        let pieces = self.split(&r, t, &all_cuts, &cand);
        drop(cand);
        let kids: Vec<u32> = pieces
            .into_iter()
            .map(|(p, c)| self.build_level(p, level + 1, c, depth + 1))
            .collect();
        self.join(&kids)
    }

    /// Cuts a final region until every box behaves like a pile with respect
    /// to the candidate coordinates, then turns it into a leaf.
    fn refine(&mut self, r: Region, cand: Vec<u32>, depth: usize) -> u32 {
        let d = self.d;
        let z: Vec<Vec<i64>> = (0..d).map(|a| self.endpoints_inside(&cand, &r, a)).collect();
        if z.iter().any(|c| c.is_empty()) {
            return self.empty_leaf(r, depth);
        }
        let mut need: Vec<Vec<i64>> = vec![Vec::new(); d];
        for &bi in &cand {
            let b = &self.boxes[bi as usize];
            let cls: Vec<Cover> = (0..d).map(|a| classify(&z[a], b.lo[a], b.hi[a])).collect();
            let owner_axes: Vec<bool> = (0..d)
                .map(|a| inside(b.lo[a], &r, a) || inside(b.hi[a], &r, a))
                .collect();
            let parts = cls.iter().filter(|&&c| c == Cover::Part).count();
            let any_nil = cls.contains(&Cover::Nil);
            let mut bad = vec![false; d];
            if !any_nil && parts >= 2 {
                for a in 0..d {
                    bad[a] |= cls[a] == Cover::Part;
                }
            }
            for i in 0..d {
                if owner_axes[i] {
                    for j in 0..d {
                        if j != i && cls[j] != Cover::All {
                            bad[j] = true;
                        }
                    }
                }
            }
            for a in 0..d {
                if bad[a] {
                    for x in [b.lo[a] - 1, b.hi[a] + 1] {
                        if inside(x, &r, a) {
                            need[a].push(x);
                        }
                    }
                }
            }
        }
        let axis = (0..d).max_by_key(|&a| need[a].len()).unwrap();
        if need[axis].is_empty() {
            self.stats.cells += 1;
            self.stats.vertex_cells += 1;
            self.stats.depth = self.stats.depth.max(depth);
            let mut trees = Vec::with_capacity(d);
            for zi in z {
                self.stats.max_candidates = self.stats.max_candidates.max(zi.len());
                trees.push(LazySegTree::build(zi).expect("sorted candidates"));
            }
            self.leaves.push(Leaf { trees });
            let l = self.leaves.len() as u32 - 1;
            return self.new_node(r, [NONE, NONE], l);
        }
        let mut cuts = std::mem::take(&mut need[axis]);
        cuts.sort_unstable();
        cuts.dedup();
        self.stats.refine_cuts += cuts.len();
        let pieces = self.split(&r, axis, &cuts, &cand);
        drop(cand);
        let kids: Vec<u32> = pieces
            .into_iter()
            .map(|(p, c)| self.refine(p, c, depth + 1))
            .collect();
        self.join(&kids)
    }

    fn leaf_omega(&self, l: u32) -> W {
        let lf = &self.leaves[l as usize];
        if lf.trees.is_empty() {
            return W::zero();
        }
        let mut w = lf.trees[0].total().clone();
        for t in &lf.trees[1..] {
            if w.is_zero() {
                break;
            }
            w = w.mul(t.total());
        }
        w
    }

    fn pull(&mut self, v: u32) {
        let n = &self.nodes[v as usize];
        let w = if n.leaf != NONE {
            self.leaf_omega(n.leaf)
        } else {
            let [a, b] = n.kids;
            let na = &self.nodes[a as usize];
            let nb = &self.nodes[b as usize];
            na.omega
                .mul_pow2(na.lambda)
                .add(&nb.omega.mul_pow2(nb.lambda))
        };
        self.nodes[v as usize].omega = w;
    }

    fn scale(&mut self, v: u32, b: &BoxD, delta: i64) {
        let node = &self.nodes[v as usize];
        if !overlaps(b, &node.region, self.d) {
            return;
        }
        if covers(b, &node.region, self.d) {
            self.nodes[v as usize].lambda += delta;
            return;
        }
        if node.leaf == NONE {
            let [a, c] = node.kids;
            self.scale(a, b, delta);
            self.scale(c, b, delta);
        } else {
            let l = node.leaf as usize;
            let lf = &mut self.leaves[l];
            if lf.trees.is_empty() {
                return;
            }
            let mut part = None;
            let mut parts = 0;
            for (a, t) in lf.trees.iter().enumerate() {
                match classify(t.coords(), b.lo[a], b.hi[a]) {
                    Cover::Nil => return,
                    Cover::Part => {
                        part = Some(a);
                        parts += 1;
                    }
                    Cover::All => {}
                }
            }
            match part {
                None => {
                    self.nodes[v as usize].lambda += delta;
                    return;
                }
                Some(a) => {
                    debug_assert_eq!(parts, 1, "cell is not clean");
                    lf.trees[a].scale(b.lo[a], b.hi[a], delta);
                }
            }
        }
        self.pull(v);
    }

    fn activate(&mut self, v: u32, b: &BoxD, on: bool) -> Result<()> {
        let node = &self.nodes[v as usize];
        if !overlaps(b, &node.region, self.d) || !has_endpoint_inside(b, &node.region, self.d) {
            return Ok(());
        }
        if node.leaf == NONE {
            let [a, c] = node.kids;
            self.activate(a, b, on)?;
            self.activate(c, b, on)?;
        } else {
            let lf = &mut self.leaves[node.leaf as usize];
            for (a, t) in lf.trees.iter_mut().enumerate() {
                for x in [b.lo[a], b.hi[a]] {
                    if t.coords().binary_search(&x).is_ok() {
                        if on {
                            t.insert(x)?;
                        } else {
                            t.delete(x)?;
                        }
                    }
                }
            }
        }
        self.pull(v);
        Ok(())
    }

    fn check_index(&self, idx: usize) -> Result<()> {
        if idx >= self.boxes.len() {
            return Err(invalid(format!("box {idx} is not in the universe")));
        }
        Ok(())
    }

    /// Makes universe box `idx` active: its vertices join the weighted set.
    pub fn insert(&mut self, idx: usize) -> Result<()> {
        self.check_index(idx)?;
        if self.active[idx] {
            return Err(invalid(format!("box {idx} is already active")));
        }
        self.active[idx] = true;
        let b = self.boxes[idx].clone();
        self.activate(self.root, &b, true)
    }

    pub fn delete(&mut self, idx: usize) -> Result<()> {
        self.check_index(idx)?;
        if !self.active[idx] {
            return Err(invalid(format!("box {idx} is not active")));
        }
        self.active[idx] = false;
        let b = self.boxes[idx].clone();
        self.activate(self.root, &b, false)
    }

    /// Adds a copy of universe box `idx` to the update multiset.
    pub fn double(&mut self, idx: usize) -> Result<()> {
        self.check_index(idx)?;
        self.mult[idx] += 1;
        let b = self.boxes[idx].clone();
        self.scale(self.root, &b, 1);
        Ok(())
    }

    /// Adds `delta` copies of box `idx` (removes them when negative).
    pub fn scale_box(&mut self, idx: usize, delta: i64) -> Result<()> {
        self.check_index(idx)?;
        let m = self.mult[idx] as i64 + delta;
        if m < 0 {
            return Err(invalid(format!("box {idx} has fewer than {} copies", -delta)));
        }
        if delta != 0 {
            self.mult[idx] = m as u32;
            let b = self.boxes[idx].clone();
            self.scale(self.root, &b, delta);
        }
        Ok(())
    }

    pub fn halve(&mut self, idx: usize) -> Result<()> {
        self.check_index(idx)?;
        if self.mult[idx] == 0 {
            return Err(invalid(format!("box {idx} has no copy left to halve")));
        }
        self.mult[idx] -= 1;
        let b = self.boxes[idx].clone();
        self.scale(self.root, &b, -1);
        Ok(())
    }

    pub fn total(&self) -> W {
        let r = &self.nodes[self.root as usize];
        r.omega.mul_pow2(r.lambda)
    }

    fn leaf_weight_in(&self, l: u32, q: &BoxD) -> W {
        let lf = &self.leaves[l as usize];
        if lf.trees.is_empty() {
            return W::zero();
        }
        let mut w = W::one();
        for (a, t) in lf.trees.iter().enumerate() {
            w = w.mul(&t.weight(q.lo[a], q.hi[a]));
            if w.is_zero() {
                break;
            }
        }
        w
    }

    fn weight_at(&self, v: u32, q: &BoxD) -> W {
        let node = &self.nodes[v as usize];
        if !overlaps(q, &node.region, self.d) {
            return W::zero();
        }
        if covers(q, &node.region, self.d) {
            return node.omega.mul_pow2(node.lambda);
        }
        let w = if node.leaf == NONE {
            let [a, b] = node.kids;
            self.weight_at(a, q).add(&self.weight_at(b, q))
        } else {
            self.leaf_weight_in(node.leaf, q)
        };
        w.mul_pow2(node.lambda)
    }

    /// Total weight of active-arrangement vertices inside `q` (any box).
    pub fn weight(&self, q: &BoxD) -> W {
        assert_eq!(q.dim(), self.d, "query dimension mismatch");
        self.weight_at(self.root, q)
    }

    fn descend(&self, mut v: u32, rng: &mut Rng) -> PointD {
        loop {
            let node = &self.nodes[v as usize];
            if node.leaf != NONE {
                let lf = &self.leaves[node.leaf as usize];
                return lf
                    .trees
                    .iter()
                    .map(|t| t.sample(rng).expect("positive leaf weight"))
                    .collect();
            }
            let [a, b] = node.kids;
            let na = &self.nodes[a as usize];
            let nb = &self.nodes[b as usize];
            let wa = na.omega.mul_pow2(na.lambda);
            let wb = nb.omega.mul_pow2(nb.lambda);
            v = if wb.is_zero() {
                a
            } else if wa.is_zero() {
                b
            } else if rng.gen::<f64>() < wa.ratio(&wa.add(&wb)) {
                a
            } else {
                b
            };
        }
    }

    /// Draws a vertex of the active arrangement with probability proportional
    /// to its weight.
    pub fn sample(&self, rng: &mut Rng) -> Result<PointD> {
        if self.total().is_zero() {
            return Err(Error::ZeroWeight);
        }
        Ok(self.descend(self.root, rng))
    }

    fn pieces_in(&self, v: u32, q: &BoxD, up: i64, out: &mut Vec<(Piece, W)>) {
        let node = &self.nodes[v as usize];
        if !overlaps(q, &node.region, self.d) {
            return;
        }
        if covers(q, &node.region, self.d) {
            let w = node.omega.mul_pow2(node.lambda + up);
            if !w.is_zero() {
                out.push((Piece::Full(v), w));
            }
            return;
        }
        let up = up + node.lambda;
        if node.leaf == NONE {
            let [a, b] = node.kids;
            self.pieces_in(a, q, up, out);
            self.pieces_in(b, q, up, out);
        } else {
            let w = self.leaf_weight_in(node.leaf, q).mul_pow2(up);
            if !w.is_zero() {
                out.push((Piece::Cut(node.leaf), w));
            }
        }
    }

    fn draw_piece(&self, p: Piece, q: &BoxD, rng: &mut Rng) -> Result<PointD> {
        match p {
            Piece::Full(v) => Ok(self.descend(v, rng)),
            Piece::Cut(l) => self.leaves[l as usize]
                .trees
                .iter()
                .enumerate()
                .map(|(a, t)| t.sample_in(q.lo[a], q.hi[a], rng))
                .collect(),
        }
    }

    /// `count` independent weight-proportional draws from the vertices in `q`.
    pub fn sample_in(&self, q: &BoxD, count: usize, rng: &mut Rng) -> Result<Vec<PointD>> {
        let mut parts = Vec::new();
        self.pieces_in(self.root, q, 0, &mut parts);
        if count > 0 && parts.is_empty() {
            return Err(Error::ZeroWeight);
        }
        let mut out = Vec::with_capacity(count);
        for _ in 0..count {
            let p = pick_weighted(&parts, rng)?;
            out.push(self.draw_piece(p, q, rng)?);
        }
        Ok(out)
    }

    /// Recomputes every stored total from scratch and returns the number of
    /// nodes whose stored value disagrees.
    pub fn audit(&self) -> usize {
        let mut bad = 0;
        for lf in &self.leaves {
            for t in &lf.trees {
                bad += t.audit();
            }
        }
        for (v, node) in self.nodes.iter().enumerate() {
            let fresh = if node.leaf != NONE {
                self.leaf_omega(node.leaf)
            } else {
                let [a, b] = node.kids;
                let na = &self.nodes[a as usize];
                let nb = &self.nodes[b as usize];
                na.omega.mul_pow2(na.lambda).add(&nb.omega.mul_pow2(nb.lambda))
            };
            if !close(&fresh, &node.omega) {
                bad += 1;
                let _ = v;
            }
        }
        bad
    }

    /// Leaf cells with their candidate coordinates per axis (empty for cells
    /// that can never hold a vertex).
    pub fn cells(&self) -> Vec<(BoxD, Vec<Vec<i64>>)> {
        self.nodes
            .iter()
            .filter(|n| n.leaf != NONE)
            .map(|n| {
                let lf = &self.leaves[n.leaf as usize];
                (
                    n.region.to_box(self.d),
                    lf.trees.iter().map(|t| t.coords().to_vec()).collect(),
                )
            })
            .collect()
    }

    /// Height of the tree.
    pub fn height(&self) -> usize {
        fn h<W: Weight>(ds: &ArrangementDs<W>, v: u32) -> usize {
            let n = &ds.nodes[v as usize];
            if n.leaf != NONE {
                1
            } else {
                1 + h(ds, n.kids[0]).max(h(ds, n.kids[1]))
            }
        }
        h(self, self.root)
    }
}

#[derive(Clone, Copy, Debug)]
enum Piece {
    Full(u32),
    Cut(u32),
}

/// Checks the pile condition of a cell with respect to its candidates:
/// every box with no empty axis is partial on at most one axis, and the
/// owner of a candidate covers the candidates of every other axis.
pub fn cell_is_clean(boxes: &[BoxD], cell: &BoxD, cand: &[Vec<i64>]) -> bool {
    let d = cell.dim();
    if cand.is_empty() || cand.iter().any(|c| c.is_empty()) {
        return true;
    }
    for b in boxes {
        let cls: Vec<Cover> = (0..d).map(|a| classify(&cand[a], b.lo[a], b.hi[a])).collect();
        if !cls.contains(&Cover::Nil) && cls.iter().filter(|&&c| c == Cover::Part).count() >= 2 {
            return false;
        }
        for i in 0..d {
            let owns = [b.lo[i], b.hi[i]]
                .iter()
                .any(|x| cand[i].binary_search(x).is_ok());
            if owns && (0..d).any(|j| j != i && cls[j] != Cover::All) {
                return false;
            }
        }
    }
    true
}

/// Draws `r` vertices of the arrangement of `boxes`, independently and with
/// probability proportional to `2^{#copies in S containing the vertex}`,
/// where `mult[i]` is the multiplicity of box `i` in `S`.
///
/// Sweeps the last axis with a structure over the projections of the boxes.
/// The first sweep records the weight of each slice (the vertices lying on
/// the facet hyperplane of one event); slices are then drawn in proportion,
/// and a second sweep draws the points inside each chosen slice.
pub fn batch_sample<W: Weight>(
    sweep: &mut ArrangementDs<W>,
    boxes: &[BoxD],
    mult: &[u32],
    r: usize,
    rng: &mut Rng,
) -> Result<Vec<PointD>> {
    if r == 0 {
        return Ok(Vec::new());
    }
    Ok(batch_sample_with_total(sweep, boxes, mult, r, rng)?.0)
}

/// [`batch_sample`] that also returns the total weight of the arrangement.
pub fn batch_sample_with_total<W: Weight>(
    sweep: &mut ArrangementDs<W>,
    boxes: &[BoxD],
    mult: &[u32],
    r: usize,
    rng: &mut Rng,
) -> Result<(Vec<PointD>, W)> {
    let d = sweep.dim() + 1;
    if boxes.len() != sweep.universe().len() || mult.len() != boxes.len() {
        return Err(usage("batch sampling needs one multiplicity per box"));
    }
    let last = d - 1;
    let mut events: Vec<(i64, bool, usize)> = Vec::with_capacity(2 * boxes.len());
    for (i, b) in boxes.iter().enumerate() {
        events.push((b.lo[last], true, i));
        events.push((b.hi[last], false, i));
    }
    events.sort_unstable();
    let proj: Vec<BoxD> = boxes.iter().map(|b| b.project_out(last)).collect();

    let mut alpha: Vec<W> = Vec::with_capacity(events.len());
    let mut total = W::zero();
    for &(_, start, i) in &events {
        if start {
            sweep.insert(i)?;
            sweep.scale_box(i, mult[i] as i64)?;
        }
        let w = sweep.weight(&proj[i]);
        total = total.add(&w);
        alpha.push(w);
        if !start {
            sweep.scale_box(i, -(mult[i] as i64))?;
            sweep.delete(i)?;
        }
    }
    if total.is_zero() {
        return Err(Error::ZeroWeight);
    }
    let mut cum = Vec::with_capacity(alpha.len());
    let mut acc = 0.0;
    for w in &alpha {
        acc += w.ratio(&total);
        cum.push(acc);
    }
    let mut delta = vec![0usize; events.len()];
    for _ in 0..r {
        let u: f64 = rng.gen::<f64>() * acc;
        let mut j = cum.partition_point(|&c| c <= u).min(events.len() - 1);
        while alpha[j].is_zero() {
            j = if j > 0 { j - 1 } else { cum.iter().position(|&c| c > 0.0).unwrap() };
        }
        delta[j] += 1;
    }
    let mut out = Vec::with_capacity(r);
    for (e, &(c, start, i)) in events.iter().enumerate() {
        if start {
            sweep.insert(i)?;
            sweep.scale_box(i, mult[i] as i64)?;
        }
        if delta[e] > 0 {
            for mut p in sweep.sample_in(&proj[i], delta[e], rng)? {
                p.push(c);
                out.push(p);
            }
        }
        if !start {
            sweep.scale_box(i, -(mult[i] as i64))?;
            sweep.delete(i)?;
        }
    }
    out.shuffle(rng);
    Ok((out, total))
}

/// Structure for sweeping `boxes` along their last axis.
pub fn sweep_structure<W: Weight>(boxes: &[BoxD]) -> Result<ArrangementDs<W>> {
    let d = boxes.first().map(|b| b.dim()).unwrap_or(2);
    if d < 2 {
        return Err(usage("batch sampling needs dimension at least 2"));
    }
    ArrangementDs::build(d - 1, boxes.iter().map(|b| b.project_out(d - 1)).collect())
}
