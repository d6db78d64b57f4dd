//! Lazy segment tree over a fixed universe of coordinates carrying doubling
//! weights.
//!
//! Every node `v` keeps an exponent `alpha(v)` and a total
//! `omega(v) = 2^alpha(v) * (omega(x) + omega(y))`; a leaf has
//! `omega = 2^alpha` when active and 0 otherwise. Exponents are never pushed
//! down, so the true exponent of a coordinate is the sum of `alpha` along its
//! root path. A leaf that becomes active later therefore sees every
//! double/halve applied to intervals covering it in the meantime.

use rand::Rng as _;

use crate::error::{invalid, Error, Result};
use crate::rng::Rng;
use crate::weight::Weight;

#[derive(Clone, Debug)]
pub struct LazySegTree<W: Weight> {
    coords: Vec<i64>,
    size: usize,
    alpha: Vec<i64>,
    omega: Vec<W>,
    active: Vec<bool>,
}

impl<W: Weight> LazySegTree<W> {
    /// Builds over sorted, distinct coordinates; everything starts inactive.
    pub fn build(coords: Vec<i64>) -> Result<Self> {
        if coords.windows(2).any(|w| w[0] >= w[1]) {
            return Err(invalid("segment tree coordinates must be sorted and distinct"));
        }
        let size = coords.len().max(1).next_power_of_two();
        Ok(LazySegTree {
            active: vec![false; coords.len()],
            coords,
            size,
            alpha: vec![0; 2 * size],
            omega: vec![W::zero(); 2 * size],
        })
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    pub fn total(&self) -> &W {
        &self.omega[1]
    }

    fn position(&self, c: i64) -> Result<usize> {
        self.coords
            .binary_search(&c)
            .map_err(|_| invalid(format!("coordinate {c} is not in the universe")))
    }

    fn span(&self, lo: i64, hi: i64) -> (usize, usize) {
        let l = self.coords.partition_point(|&x| x < lo);
        let r = self.coords.partition_point(|&x| x <= hi);
        (l, r.max(l))
    }

    fn pull(&mut self, v: usize) {
        let s = self.omega[2 * v].add(&self.omega[2 * v + 1]);
        self.omega[v] = s.mul_pow2(self.alpha[v]);
    }

    fn leaf_omega(&self, i: usize) -> W {
        if self.active[i] {
            W::pow2(self.alpha[self.size + i])
        } else {
            W::zero()
        }
    }

    fn update(&mut self, v: usize, nl: usize, nr: usize, l: usize, r: usize, delta: i64) {
        if r <= nl || nr <= l {
            return;
        }
        if l <= nl && nr <= r {
            self.alpha[v] += delta;
            self.omega[v] = self.omega[v].mul_pow2(delta);
            return;
        }
        let mid = (nl + nr) / 2;
        self.update(2 * v, nl, mid, l, r, delta);
        self.update(2 * v + 1, mid, nr, l, r, delta);
        self.pull(v);
    }

    /// Multiplies the weight of every coordinate in `[lo, hi]` by `2^delta`.
    pub fn scale(&mut self, lo: i64, hi: i64, delta: i64) {
        let (l, r) = self.span(lo, hi);
        if l < r {
            self.update(1, 0, self.size, l, r, delta);
        }
    }

    /// Multiplies the weight of every coordinate in `[lo, hi]` by 2.
    pub fn double(&mut self, lo: i64, hi: i64) {
        self.scale(lo, hi, 1);
    }

    /// Divides the weight of every coordinate in `[lo, hi]` by 2.
    pub fn halve(&mut self, lo: i64, hi: i64) {
        self.scale(lo, hi, -1);
    }

    fn query(&self, v: usize, nl: usize, nr: usize, l: usize, r: usize, up: i64) -> W {
        if r <= nl || nr <= l {
            return W::zero();
        }
        if l <= nl && nr <= r {
            return self.omega[v].mul_pow2(up);
        }
        let up = up + self.alpha[v];
        let mid = (nl + nr) / 2;
        self.query(2 * v, nl, mid, l, r, up)
            .add(&self.query(2 * v + 1, mid, nr, l, r, up))
    }

    /// Total weight of active coordinates in `[lo, hi]`.
    pub fn weight(&self, lo: i64, hi: i64) -> W {
        let (l, r) = self.span(lo, hi);
        if l >= r {
            return W::zero();
        }
        if l == 0 && r == self.coords.len() {
            return self.omega[1].clone();
        }
        self.query(1, 0, self.size, l, r, 0)
    }

    /// Sum of path exponents for the coordinate at position `i`.
    fn path_exponent(&self, i: usize) -> i64 {
        let mut v = self.size + i;
        let mut e = 0;
        while v >= 1 {
            e += self.alpha[v];
            v >>= 1;
        }
        e
    }

    /// Doubling exponent currently accumulated at coordinate `c` (active or not).
    pub fn exponent(&self, c: i64) -> Result<i64> {
        Ok(self.path_exponent(self.position(c)?))
    }

    pub fn is_active(&self, c: i64) -> Result<bool> {
        Ok(self.active[self.position(c)?])
    }

    fn set_active(&mut self, c: i64, on: bool) -> Result<()> {
        let i = self.position(c)?;
        if self.active[i] == on {
            return Err(invalid(format!(
                "coordinate {c} is already {}",
                if on { "active" } else { "inactive" }
            )));
        }
        self.active[i] = on;
        let mut v = self.size + i;
        self.omega[v] = self.leaf_omega(i);
        v >>= 1;
        while v >= 1 {
            self.pull(v);
            v >>= 1;
        }
        Ok(())
    }

    pub fn insert(&mut self, c: i64) -> Result<()> {
        self.set_active(c, true)
    }

    pub fn delete(&mut self, c: i64) -> Result<()> {
        self.set_active(c, false)
    }

    fn descend(&self, mut v: usize, rng: &mut Rng) -> i64 {
        while v < self.size {
            let l = &self.omega[2 * v];
            let r = &self.omega[2 * v + 1];
            v = if r.is_zero() {
                2 * v
            } else if l.is_zero() {
                2 * v + 1
            } else {
                let pl = l.ratio(&l.add(r));
                if rng.gen::<f64>() < pl {
                    2 * v
                } else {
                    2 * v + 1
                }
            };
        }
        self.coords[v - self.size]
    }

    /// Draws an active coordinate with probability proportional to its weight.
    pub fn sample(&self, rng: &mut Rng) -> Result<i64> {
        if self.omega[1].is_zero() {
            return Err(Error::ZeroWeight);
        }
        Ok(self.descend(1, rng))
    }

    fn collect(&self, v: usize, nl: usize, nr: usize, l: usize, r: usize, up: i64, out: &mut Vec<(usize, W)>) {
        if r <= nl || nr <= l {
            return;
        }
        if l <= nl && nr <= r {
            if !self.omega[v].is_zero() {
                out.push((v, self.omega[v].mul_pow2(up)));
            }
            return;
        }
        let up = up + self.alpha[v];
        let mid = (nl + nr) / 2;
        self.collect(2 * v, nl, mid, l, r, up, out);
        self.collect(2 * v + 1, mid, nr, l, r, up, out);
    }

    /// Weight-proportional draw restricted to `[lo, hi]`.
    pub fn sample_in(&self, lo: i64, hi: i64, rng: &mut Rng) -> Result<i64> {
        let (l, r) = self.span(lo, hi);
        let mut parts = Vec::new();
        if l < r {
            self.collect(1, 0, self.size, l, r, 0, &mut parts);
        }
        let v = pick_weighted(&parts, rng)?;
        Ok(self.descend(v, rng))
    }

    /// Recomputes every total from the leaves and compares with the stored
    /// values; returns the number of disagreeing nodes.
    pub fn audit(&self) -> usize {
        let mut bad = 0;
        let mut fresh = vec![W::zero(); 2 * self.size];
        for i in 0..self.size {
            if i < self.coords.len() {
                fresh[self.size + i] = self.leaf_omega(i);
            }
        }
        for v in (1..self.size).rev() {
            fresh[v] = fresh[2 * v].add(&fresh[2 * v + 1]).mul_pow2(self.alpha[v]);
        }
        for v in 1..2 * self.size {
            if !close(&fresh[v], &self.omega[v]) {
                bad += 1;
            }
        }
        bad
    }
}

pub(crate) fn close<W: Weight>(a: &W, b: &W) -> bool {
    if a == b {
        return true;
    }
    if a.is_zero() || b.is_zero() {
        return false;
    }
    (a.ratio(b) - 1.0).abs() < 1e-9
}

/// Picks the key of one of `parts` with probability proportional to its weight.
pub(crate) fn pick_weighted<K: Copy, W: Weight>(parts: &[(K, W)], rng: &mut Rng) -> Result<K> {
    let mut total = W::zero();
    for (_, w) in parts {
        total = total.add(w);
    }
    if total.is_zero() {
        return Err(Error::ZeroWeight);
    }
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    let mut last = None;
    for (k, w) in parts {
        if w.is_zero() {
            continue;
        }
        acc += w.ratio(&total);
        last = Some(*k);
        if u < acc {
            return Ok(*k);
        }
    }
    Ok(last.unwrap())
}
