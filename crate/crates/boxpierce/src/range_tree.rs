//! Multi-level orthogonal range trees over a weighted point multiset.
//!
//! A static tree sorts points on axis 0 and hangs a tree for the remaining
//! axes off every node of an implicit segment tree; the last axis is a sorted
//! array with a Fenwick tree of live weights. Updates use Bentley-Saxe
//! buckets plus tombstones, with a global rebuild once half the stored
//! weight is dead.

use std::collections::HashMap;

use crate::error::{invalid, Result};
use crate::geom::{BoxD, PointD};

/// Opaque canonical-node identifier, stable until the next update.
pub type NodeId = u64;

const SMALL: usize = 4;
const KIND_POINT: u64 = 1 << 62;

#[derive(Clone, Copy, Debug)]
enum Ref {
    Empty,
    Inner(u32),
    Leaf(u32),
    /// Few points: scan positions `[l, r)` of the given inner structure.
    Small(u32, u32, u32),
}

#[derive(Clone, Debug)]
struct Inner {
    axis: usize,
    keys: Vec<i64>,
    ids: Vec<u32>,
    size: usize,
    child: Vec<Ref>,
}

#[derive(Clone, Debug)]
struct LeafArr {
    keys: Vec<i64>,
    ids: Vec<u32>,
    size: usize,
    fen: Vec<u64>,
}

impl LeafArr {
    fn add(&mut self, pos: usize, delta: i64) {
        let mut i = pos + 1;
        while i <= self.keys.len() {
            self.fen[i] = (self.fen[i] as i64 + delta) as u64;
            i += i & i.wrapping_neg();
        }
    }
    fn prefix(&self, pos: usize) -> u64 {
        let mut i = pos;
        let mut s = 0;
        while i > 0 {
            s += self.fen[i];
            i &= i - 1;
        }
        s
    }
    fn sum(&self, l: usize, r: usize) -> u64 {
        if l >= r {
            0
        } else {
            self.prefix(r) - self.prefix(l)
        }
    }
}

fn heap_range(v: usize, size: usize) -> (usize, usize) {
    let depth = usize::BITS - 1 - v.leading_zeros();
    let width = size >> depth;
    let j = v - (1 << depth);
    (j * width, (j + 1) * width)
}

fn canonical_heap(mut l: usize, mut r: usize, size: usize, out: &mut Vec<usize>) {
    l += size;
    r += size;
    while l < r {
        if l & 1 == 1 {
            out.push(l);
            l += 1;
        }
        if r & 1 == 1 {
            r -= 1;
            out.push(r);
        }
        l >>= 1;
        r >>= 1;
    }
}

#[derive(Clone, Debug)]
struct StaticTree {
    d: usize,
    pts: Vec<i64>,
    w: Vec<u64>,
    inner: Vec<Inner>,
    leaves: Vec<LeafArr>,
    root: Ref,
    live: u64,
}

impl StaticTree {
    fn build(d: usize, pts: Vec<i64>, w: Vec<u64>) -> Self {
        let m = w.len();
        let mut t = StaticTree {
            d,
            pts,
            live: w.iter().sum(),
            w,
            inner: Vec::new(),
            leaves: Vec::new(),
            root: Ref::Empty,
        };
        if m > 0 {
            let ids: Vec<u32> = (0..m as u32).collect();
            t.root = t.build_ref(ids, 0);
        }
        t
    }

    #[inline]
    fn coord(&self, id: u32, axis: usize) -> i64 {
        self.pts[id as usize * self.d + axis]
    }

    fn point(&self, id: u32) -> PointD {
        let s = id as usize * self.d;
        self.pts[s..s + self.d].to_vec()
    }

    fn in_box(&self, id: u32, b: &BoxD) -> bool {
        let s = id as usize * self.d;
        (0..self.d).all(|a| {
            let x = self.pts[s + a];
            b.lo[a] <= x && x <= b.hi[a]
        })
    }

    fn build_ref(&mut self, mut ids: Vec<u32>, axis: usize) -> Ref {
        ids.sort_unstable_by_key(|&i| (self.coord(i, axis), i));
        let keys: Vec<i64> = ids.iter().map(|&i| self.coord(i, axis)).collect();
        let m = ids.len();
        let size = m.next_power_of_two();
        if axis + 1 == self.d {
            let mut leaf = LeafArr {
                keys,
                size,
                fen: vec![0; m + 1],
                ids,
            };
            for p in 0..m {
                let wt = self.w[leaf.ids[p] as usize] as i64;
                leaf.add(p, wt);
            }
            self.leaves.push(leaf);
            return Ref::Leaf(self.leaves.len() as u32 - 1);
        }
        let me = self.inner.len() as u32;
        self.inner.push(Inner {
            axis,
            keys,
            ids: Vec::new(),
            size,
            child: vec![Ref::Empty; 2 * size],
        });
        for v in 1..2 * size {
            let (l, r) = heap_range(v, size);
            if l >= m {
                continue;
            }
            let r = r.min(m);
            let c = if r - l <= SMALL {
                Ref::Small(me, l as u32, r as u32)
            } else {
                Ref::Empty
            };
            self.inner[me as usize].child[v] = c;
        }
        for v in 1..2 * size {
            let (l, r) = heap_range(v, size);
            if l >= m || r.min(m) - l <= SMALL {
                continue;
            }
            let sub = ids[l..r.min(m)].to_vec();
            let c = self.build_ref(sub, axis + 1);
            self.inner[me as usize].child[v] = c;
        }
        self.inner[me as usize].ids = ids;
        Ref::Inner(me)
    }

    fn span(keys: &[i64], lo: i64, hi: i64) -> (usize, usize) {
        let l = keys.partition_point(|&k| k < lo);
        let r = keys.partition_point(|&k| k <= hi);
        (l, r.max(l))
    }

    fn count_ref(&self, r: Ref, b: &BoxD, buf: &mut Vec<usize>) -> u64 {
        match r {
            Ref::Empty => 0,
            Ref::Leaf(j) => {
                let lf = &self.leaves[j as usize];
                let a = self.d - 1;
                let (l, r) = Self::span(&lf.keys, b.lo[a], b.hi[a]);
                lf.sum(l, r)
            }
            Ref::Small(i, l, r) => {
                let inn = &self.inner[i as usize];
                inn.ids[l as usize..r as usize]
                    .iter()
                    .filter(|&&id| self.in_box(id, b))
                    .map(|&id| self.w[id as usize])
                    .sum()
            }
            Ref::Inner(i) => {
                let inn = &self.inner[i as usize];
                let a = inn.axis;
                let (l, r) = Self::span(&inn.keys, b.lo[a], b.hi[a]);
                if l >= r {
                    return 0;
                }
                let start = buf.len();
                canonical_heap(l, r, inn.size, buf);
                let mut s = 0;
                let end = buf.len();
                for k in start..end {
                    let v = buf[k];
                    s += self.count_ref(inn.child[v], b, buf);
                }
                buf.truncate(start);
                s
            }
        }
    }

    fn count(&self, b: &BoxD) -> u64 {
        let mut buf = Vec::with_capacity(64);
        self.count_ref(self.root, b, &mut buf)
    }

    fn canonical_ref(&self, r: Ref, b: &BoxD, tag: u64, out: &mut Vec<NodeId>) {
        match r {
            Ref::Empty => {}
            Ref::Leaf(j) => {
                let lf = &self.leaves[j as usize];
                let a = self.d - 1;
                let (l, r) = Self::span(&lf.keys, b.lo[a], b.hi[a]);
                let mut vs = Vec::new();
                canonical_heap(l, r, lf.size, &mut vs);
                for v in vs {
                    let (vl, vr) = heap_range(v, lf.size);
                    if lf.sum(vl, vr.min(lf.keys.len())) > 0 {
                        out.push(tag | (j as u64) << 28 | v as u64);
                    }
                }
            }
            Ref::Small(i, l, r) => {
                let inn = &self.inner[i as usize];
                for &id in &inn.ids[l as usize..r as usize] {
                    if self.w[id as usize] > 0 && self.in_box(id, b) {
                        out.push(tag | KIND_POINT | id as u64);
                    }
                }
            }
            Ref::Inner(i) => {
                let inn = &self.inner[i as usize];
                let a = inn.axis;
                let (l, r) = Self::span(&inn.keys, b.lo[a], b.hi[a]);
                let mut vs = Vec::new();
                canonical_heap(l, r, inn.size, &mut vs);
                for v in vs {
                    self.canonical_ref(inn.child[v], b, tag, out);
                }
            }
        }
    }

    fn node_ids(&self, id: NodeId) -> Vec<u32> {
        if id & KIND_POINT != 0 {
            let p = (id & ((1 << 56) - 1)) as u32;
            return if self.w[p as usize] > 0 { vec![p] } else { vec![] };
        }
        let j = ((id >> 28) & ((1 << 28) - 1)) as usize;
        let v = (id & ((1 << 28) - 1)) as usize;
        let lf = &self.leaves[j];
        let (l, r) = heap_range(v, lf.size);
        let r = r.min(lf.keys.len());
        lf.ids[l.min(r)..r]
            .iter()
            .copied()
            .filter(|&p| self.w[p as usize] > 0)
            .collect()
    }

    fn adjust_ref(&mut self, r: Ref, id: u32, delta: i64) {
        match r {
            Ref::Empty | Ref::Small(..) => {}
            Ref::Leaf(j) => {
                let key = self.coord(id, self.d - 1);
                let lf = &mut self.leaves[j as usize];
                let p = bsearch_pair(&lf.keys, &lf.ids, key, id);
                lf.add(p, delta);
            }
            Ref::Inner(i) => {
                let (a, size) = {
                    let inn = &self.inner[i as usize];
                    (inn.axis, inn.size)
                };
                let key = self.coord(id, a);
                let p = {
                    let inn = &self.inner[i as usize];
                    bsearch_pair(&inn.keys, &inn.ids, key, id)
                };
                let mut v = p + size;
                while v >= 1 {
                    let c = self.inner[i as usize].child[v];
                    self.adjust_ref(c, id, delta);
                    v >>= 1;
                }
            }
        }
    }

    fn adjust(&mut self, id: u32, delta: i64) {
        self.w[id as usize] = (self.w[id as usize] as i64 + delta) as u64;
        self.live = (self.live as i64 + delta) as u64;
        let root = self.root;
        self.adjust_ref(root, id, delta);
    }

    fn live_points(&self) -> impl Iterator<Item = (PointD, u64)> + '_ {
        (0..self.w.len() as u32)
            .filter(|&i| self.w[i as usize] > 0)
            .map(|i| (self.point(i), self.w[i as usize]))
    }
}

fn bsearch_pair(keys: &[i64], ids: &[u32], key: i64, id: u32) -> usize {
    let mut lo = 0;
    let mut hi = keys.len();
    while lo < hi {
        let mid = (lo + hi) / 2;
        if (keys[mid], ids[mid]) < (key, id) {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Dynamic weighted range tree (weights act as multiplicities).
#[derive(Clone, Debug)]
pub struct RangeTree {
    d: usize,
    buckets: Vec<Option<StaticTree>>,
    index: Option<HashMap<PointD, Vec<(u8, u32)>>>,
    live: u64,
    stored: u64,
}

impl RangeTree {
    pub fn new(d: usize) -> Self {
        RangeTree {
            d,
            buckets: Vec::new(),
            index: None,
            live: 0,
            stored: 0,
        }
    }

    pub fn build(d: usize, points: Vec<PointD>) -> Self {
        let w = vec![1; points.len()];
        Self::build_weighted(d, points, w)
    }

    /// Builds over distinct-or-not points carrying positive multiplicities.
    pub fn build_weighted(d: usize, points: Vec<PointD>, weights: Vec<u64>) -> Self {
        assert_eq!(points.len(), weights.len());
        let mut t = RangeTree::new(d);
        t.place(points, weights);
        t
    }

    fn place(&mut self, points: Vec<PointD>, weights: Vec<u64>) {
        let m = points.len();
        if m == 0 {
            return;
        }
        let mut flat = Vec::with_capacity(m * self.d);
        for p in &points {
            assert_eq!(p.len(), self.d, "point dimension mismatch");
            flat.extend_from_slice(p);
        }
        let total: u64 = weights.iter().sum();
        let slot = (usize::BITS - (m - 1).leading_zeros()) as usize;
        let slot = if m == 1 { 0 } else { slot };
        while self.buckets.len() <= slot {
            self.buckets.push(None);
        }
        debug_assert!(self.buckets[slot].is_none());
        self.buckets[slot] = Some(StaticTree::build(self.d, flat, weights));
        self.live += total;
        self.stored += total;
        if let Some(index) = self.index.as_mut() {
            let bt = self.buckets[slot].as_ref().unwrap();
            for (id, p) in points.into_iter().enumerate() {
                if bt.w[id] > 0 {
                    index.entry(p).or_default().push((slot as u8, id as u32));
                }
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    /// Total live weight.
    pub fn len(&self) -> usize {
        self.live as usize
    }

    pub fn is_empty(&self) -> bool {
        self.live == 0
    }

    /// Weighted number of stored points inside the closed box `b`.
    pub fn count(&self, b: &BoxD) -> u64 {
        assert_eq!(b.dim(), self.d, "box dimension mismatch");
        self.buckets.iter().flatten().map(|t| t.count(b)).sum()
    }

    pub fn any_in(&self, b: &BoxD) -> bool {
        self.buckets.iter().flatten().any(|t| t.count(b) > 0)
    }

    /// Disjoint canonical nodes whose union is the live content of `b`.
    pub fn canonical(&self, b: &BoxD) -> Vec<NodeId> {
        assert_eq!(b.dim(), self.d, "box dimension mismatch");
        let mut out = Vec::new();
        for (s, t) in self.buckets.iter().enumerate() {
            if let Some(t) = t {
                t.canonical_ref(t.root, b, (s as u64) << 56, &mut out);
            }
        }
        out
    }

    /// Live points of a canonical node, each with its multiplicity.
    pub fn node_points(&self, id: NodeId) -> Vec<(PointD, u64)> {
        let s = ((id >> 56) & 0x3f) as usize;
        let t = self.buckets[s].as_ref().expect("stale node id");
        t.node_ids(id & !(0x3f << 56))
            .into_iter()
            .map(|p| (t.point(p), t.w[p as usize]))
            .collect()
    }

    /// Live points in `b` with multiplicities.
    pub fn report(&self, b: &BoxD) -> Vec<(PointD, u64)> {
        self.canonical(b)
            .into_iter()
            .flat_map(|id| self.node_points(id))
            .collect()
    }

    pub fn first_in(&self, b: &BoxD) -> Option<PointD> {
        for id in self.canonical(b) {
            if let Some((p, _)) = self.node_points(id).into_iter().next() {
                return Some(p);
            }
        }
        None
    }

    fn ensure_index(&mut self) {
        if self.index.is_some() {
            return;
        }
        let mut index: HashMap<PointD, Vec<(u8, u32)>> = HashMap::new();
        for (s, t) in self.buckets.iter().enumerate() {
            if let Some(t) = t {
                for id in 0..t.w.len() as u32 {
                    if t.w[id as usize] > 0 {
                        index.entry(t.point(id)).or_default().push((s as u8, id));
                    }
                }
            }
        }
        self.index = Some(index);
    }

    pub fn insert(&mut self, p: PointD) {
        assert_eq!(p.len(), self.d, "point dimension mismatch");
        self.ensure_index();
        let mut pts = vec![p];
        let mut ws = vec![1u64];
        let mut s = 0;
        while s < self.buckets.len() && self.buckets[s].is_some() {
            let t = self.buckets[s].take().unwrap();
            self.stored -= t.w.iter().sum::<u64>();
            self.live -= t.live;
            for (q, w) in t.live_points() {
                pts.push(q);
                ws.push(w);
            }
            let index = self.index.as_mut().unwrap();
            for id in 0..t.w.len() as u32 {
                if t.w[id as usize] > 0 {
                    if let Some(v) = index.get_mut(&t.point(id)) {
                        v.retain(|&e| e != (s as u8, id));
                    }
                }
            }
            s += 1;
        }
        // `place` picks the slot from the size; force it to `s` here
        let total: u64 = ws.iter().sum();
        let mut flat = Vec::with_capacity(pts.len() * self.d);
        for q in &pts {
            flat.extend_from_slice(q);
        }
        while self.buckets.len() <= s {
            self.buckets.push(None);
        }
        let t = StaticTree::build(self.d, flat, ws);
        let index = self.index.as_mut().unwrap();
        for (id, q) in pts.into_iter().enumerate() {
            index.entry(q).or_default().push((s as u8, id as u32));
        }
        self.buckets[s] = Some(t);
        self.live += total;
        self.stored += total;
    }

    /// Removes one copy of `p`.
    pub fn delete(&mut self, p: &[i64]) -> Result<()> {
        self.ensure_index();
        let index = self.index.as_mut().unwrap();
        let entry = match index.get_mut(p) {
            Some(v) if !v.is_empty() => *v.last().unwrap(),
            _ => return Err(invalid(format!("point {p:?} is not stored"))),
        };
        let (s, id) = entry;
        let t = self.buckets[s as usize].as_mut().unwrap();
        if t.w[id as usize] == 1 {
            let v = index.get_mut(p).unwrap();
            v.pop();
            if v.is_empty() {
                index.remove(p);
            }
        }
        t.adjust(id, -1);
        self.live -= 1;
        if self.live * 2 < self.stored {
            self.rebuild();
        }
        Ok(())
    }

    fn rebuild(&mut self) {
        let mut pts = Vec::new();
        let mut ws = Vec::new();
        for t in self.buckets.drain(..).flatten() {
            for (q, w) in t.live_points() {
                pts.push(q);
                ws.push(w);
            }
        }
        self.live = 0;
        self.stored = 0;
        let had_index = self.index.is_some();
        self.index = None;
        self.place(pts, ws);
        if had_index {
            self.ensure_index();
        }
    }
}
