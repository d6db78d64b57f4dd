//! Dynamic piercing of planar rectangles and squares.
//!
//! Boxes live as points in a 4D range tree: a rectangle `[a1,a2]×[b1,b2]`
//! becomes `(a1, b1, a2, b2)`, and it contains `p` exactly when that point
//! lies in the orthant `Q_p = {x1 <= px, x2 <= py, x3 >= px, x4 >= py}`.
//! Insertions add a point when needed, deletions change nothing, and the
//! piercing set is rebuilt from scratch after `⌈s/2⌉` updates, `s` being the
//! size of the last rebuilt set.
//!
//! Squares use doubled coordinates: a square with center `c` and half side
//! `a` maps to `(2cx - 2a, 2cy - 2a, 2cx + 2a, 2cy + 2a)`, and a point `p`
//! to `2p`. In these sheared coordinates the cone of `p` over the
//! (center, radius) space is again an orthant, so both modes share the
//! complement partition below.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rand::seq::index::sample as sample_indices;

use crate::error::{invalid, usage, Result};
use crate::geom::{dedup_points, normalize_int_boxes, BoxD, PiercingSolution, PointD};
use crate::multiround::too_large;
use crate::mwu::{improved_mwu, ImprovedMwuConfig};
use crate::range_tree::{NodeId, RangeTree};
use crate::rng::{derive_seed, sub_rng};

/// Stand-ins for unbounded coordinates.
pub const NEG_INF: i64 = i64::MIN / 4;
pub const POS_INF: i64 = i64::MAX / 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    #[default]
    Rectangles,
    Squares,
}

#[derive(Debug, Clone, Copy)]
pub struct DynamicConfig {
    pub mode: Mode,
    pub seed: u64,
    /// Sample size constant.
    pub c1: f64,
    /// Residue size constant.
    pub c2: f64,
    /// Failed attempts at one guess before it is doubled.
    pub max_restarts: usize,
}

impl Default for DynamicConfig {
    fn default() -> Self {
        DynamicConfig {
            mode: Mode::Rectangles,
            seed: 0,
            c1: 2.0,
            c2: 4.0,
            max_restarts: 3,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DynamicStats {
    pub updates: u64,
    pub reconstructions: u64,
    pub restarts: u64,
    pub escalations: u64,
    pub direct_filters: u64,
    pub lazy_points: u64,
}

/// The complement of a union of orthants `Q_p`, cut into boxes with
/// pairwise-disjoint interiors (closed on the integer grid).
#[derive(Debug, Clone)]
pub struct OrthantComplement {
    pub points: Vec<(i64, i64)>,
    pub members: Vec<BoxD>,
}

impl OrthantComplement {
    /// True when the 4D point lies in no orthant.
    pub fn outside_all(points: &[(i64, i64)], x: &[i64]) -> bool {
        points
            .iter()
            .all(|&(px, py)| !(x[0] <= px && x[1] <= py && x[2] >= px && x[3] >= py))
    }
}

/// Lower-left quadrant complement: boxes `(x1 range, x2 from)` covering the
/// points of the plane dominated by none of `pts`.
fn staircase_2d(pts: &[(i64, i64)]) -> Vec<(i64, i64, i64)> {
    let mut sorted: Vec<(i64, i64)> = pts.to_vec();
    sorted.sort_by(|a, b| b.0.cmp(&a.0).then(b.1.cmp(&a.1)));
    // maxima by decreasing x, increasing y
    let mut maxima: Vec<(i64, i64)> = Vec::new();
    for p in sorted {
        if maxima.last().map_or(true, |m| p.1 > m.1) {
            maxima.push(p);
        }
    }
    maxima.reverse();
    let mut out = Vec::with_capacity(maxima.len() + 1);
    let mut from = NEG_INF;
    for &(mx, my) in &maxima {
        out.push((from, mx, my + 1));
        from = mx + 1;
    }
    out.push((from, POS_INF, NEG_INF));
    out
}

type Cell3 = (i64, i64, i64, i64);

/// Complement of the octants `{x1 <= px, x2 <= py, x3 >= px}` as boxes
/// `(x1 lo, x1 hi, x2 lo, x3 lo, x3 hi)`; `x2` is unbounded above.
fn octant_complement_3d(pts: &[(i64, i64)]) -> Vec<(Cell3, i64, i64)> {
    let mut order: Vec<(i64, i64)> = pts.to_vec();
    order.sort();
    let mut open: BTreeMap<Cell3, i64> = BTreeMap::new();
    let mut out = Vec::new();
    let key = |(a, b, c): (i64, i64, i64)| (a, b, c, 0);
    for cell in staircase_2d(&[]) {
        open.insert(key(cell), NEG_INF);
    }
    let mut active: Vec<(i64, i64)> = Vec::new();
    let mut i = 0;
    while i < order.len() {
        let c = order[i].0;
        while i < order.len() && order[i].0 == c {
            active.push(order[i]);
            i += 1;
        }
        let now: BTreeSet<Cell3> = staircase_2d(&active).into_iter().map(key).collect();
        let gone: Vec<Cell3> = open.keys().filter(|k| !now.contains(k)).copied().collect();
        for g in gone {
            let start = open.remove(&g).unwrap();
            out.push((g, start, c - 1));
        }
        for k in now {
            open.entry(k).or_insert(c);
        }
    }
    for (k, start) in open {
        out.push((k, start, POS_INF));
    }
    out
}

/// Partition of `R^4 \ ∪ Q_p` for the given planar points. Members are
/// swept along `x4`: between consecutive `py` values the cross-section is a
/// fixed 3D octant-union complement, and a 3D cell is only closed off when
/// the cross-section stops containing it.
pub fn complement_partition(points: &[(i64, i64)]) -> OrthantComplement {
    let mut order: Vec<(i64, i64)> = points.to_vec();
    order.sort_by_key(|p| (p.1, p.0));
    let mut open: BTreeMap<(Cell3, i64, i64), i64> = BTreeMap::new();
    let mut members = Vec::new();
    let emit = |cell: &(Cell3, i64, i64), lo4: i64, hi4: i64, members: &mut Vec<BoxD>| {
        let ((a, b, c, _), d, e) = *cell;
        if lo4 <= hi4 {
            members.push(BoxD::new(vec![a, c, d, lo4], vec![b, POS_INF, e, hi4]));
        }
    };
    for cell in octant_complement_3d(&[]) {
        open.insert(cell, NEG_INF);
    }
    let mut active: Vec<(i64, i64)> = Vec::new();
    let mut i = 0;
    while i < order.len() {
        let y = order[i].1;
        while i < order.len() && order[i].1 == y {
            active.push(order[i]);
            i += 1;
        }
        let now: BTreeSet<(Cell3, i64, i64)> = octant_complement_3d(&active).into_iter().collect();
        let gone: Vec<(Cell3, i64, i64)> = open.keys().filter(|k| !now.contains(k)).copied().collect();
        for g in gone {
            let start = open.remove(&g).unwrap();
            emit(&g, start, y - 1, &mut members);
        }
        for k in now {
            open.entry(k).or_insert(y);
        }
    }
    for (k, start) in open {
        emit(&k, start, POS_INF, &mut members);
    }
    OrthantComplement {
        points: points.to_vec(),
        members,
    }
}

/// Canonical nodes of `tree` (over 4D box images) whose union is the set of
/// images outside every orthant of `points`.
pub fn unpierced_canonical(points: &[(i64, i64)], tree: &RangeTree) -> Vec<NodeId> {
    complement_partition(points)
        .members
        .iter()
        .flat_map(|m| tree.canonical(m))
        .collect()
}

/// Image of a square in the sheared (center, radius) coordinates.
pub fn square_image(b: &BoxD) -> PointD {
    vec![2 * b.lo[0], 2 * b.lo[1], 2 * b.hi[0], 2 * b.hi[1]]
}

fn rect_image(b: &BoxD) -> PointD {
    vec![b.lo[0], b.lo[1], b.hi[0], b.hi[1]]
}

/// Canonical nodes holding exactly the squares no point of `points` pierces;
/// `tree` stores [`square_image`]s.
pub fn squares_unpierced_canonical(points: &[PointD], tree: &RangeTree) -> Vec<NodeId> {
    let apexes: Vec<(i64, i64)> = points.iter().map(|p| (2 * p[0], 2 * p[1])).collect();
    unpierced_canonical(&apexes, tree)
}

pub fn is_square(b: &BoxD) -> bool {
    b.dim() == 2 && b.hi[0] - b.lo[0] == b.hi[1] - b.lo[1]
}

/// Piercing points of integer boxes in their own coordinates.
pub fn solve_int_boxes(boxes: &[BoxD], seed: u64) -> Result<Vec<PointD>> {
    if boxes.is_empty() {
        return Ok(Vec::new());
    }
    let inst = normalize_int_boxes(boxes)?;
    let sol = improved_mwu(&inst, &ImprovedMwuConfig { seed, ..Default::default() })?;
    Ok(sol
        .points
        .iter()
        .map(|p| inst.denormalize_point(p).into_iter().map(|c| c as i64).collect())
        .collect())
}

pub struct DynamicPiercer {
    cfg: DynamicConfig,
    boxes: Vec<BoxD>,
    slots: HashMap<BoxD, Vec<usize>>,
    tree: RangeTree,
    points: Vec<PointD>,
    point_tree: RangeTree,
    s: usize,
    since: usize,
    solves: u64,
    stats: DynamicStats,
}

impl DynamicPiercer {
    pub fn new(cfg: DynamicConfig) -> Self {
        DynamicPiercer {
            cfg,
            boxes: Vec::new(),
            slots: HashMap::new(),
            tree: RangeTree::new(4),
            points: Vec::new(),
            point_tree: RangeTree::new(2),
            s: 0,
            since: 0,
            solves: 0,
            stats: DynamicStats::default(),
        }
    }

    pub fn mode(&self) -> Mode {
        self.cfg.mode
    }

    pub fn len(&self) -> usize {
        self.boxes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.boxes.is_empty()
    }

    pub fn boxes(&self) -> &[BoxD] {
        &self.boxes
    }

    /// The maintained piercing set.
    pub fn points(&self) -> &[PointD] {
        &self.points
    }

    pub fn stats(&self) -> &DynamicStats {
        &self.stats
    }

    /// Updates left before the next rebuild.
    pub fn budget(&self) -> usize {
        self.threshold() - self.since
    }

    fn threshold(&self) -> usize {
        self.s.div_ceil(2).max(1)
    }

    fn image(&self, b: &BoxD) -> PointD {
        match self.cfg.mode {
            Mode::Rectangles => rect_image(b),
            Mode::Squares => square_image(b),
        }
    }

    fn preimage(&self, p: &[i64]) -> BoxD {
        match self.cfg.mode {
            Mode::Rectangles => BoxD::new(vec![p[0], p[1]], vec![p[2], p[3]]),
            Mode::Squares => BoxD::new(vec![p[0] / 2, p[1] / 2], vec![p[2] / 2, p[3] / 2]),
        }
    }

    fn check(&self, b: &BoxD) -> Result<()> {
        if b.dim() != 2 {
            return Err(usage("dynamic piercing is planar only"));
        }
        if (0..2).any(|a| b.lo[a] > b.hi[a]) {
            return Err(usage("box has lo > hi"));
        }
        if self.cfg.mode == Mode::Squares && !is_square(b) {
            return Err(usage("box is not a square"));
        }
        Ok(())
    }

    fn set_points(&mut self, points: Vec<PointD>) {
        self.point_tree = RangeTree::build(2, points.clone());
        self.points = points;
    }

    /// Returns true when the update triggered a rebuild.
    fn tick(&mut self) -> Result<bool> {
        self.stats.updates += 1;
        self.since += 1;
        if self.since >= self.threshold() {
            self.reconstruct()?;
            return Ok(true);
        }
        Ok(false)
    }

    pub fn insert(&mut self, b: BoxD) -> Result<bool> {
        self.check(&b)?;
        self.tree.insert(self.image(&b));
        if !self.point_tree.any_in(&b) {
            let c: PointD = (0..2).map(|a| b.lo[a] + (b.hi[a] - b.lo[a]) / 2).collect();
            self.point_tree.insert(c.clone());
            self.points.push(c);
            self.stats.lazy_points += 1;
        }
        self.slots.entry(b.clone()).or_default().push(self.boxes.len());
        self.boxes.push(b);
        self.tick()
    }

    pub fn delete(&mut self, b: &BoxD) -> Result<bool> {
        let slot = match self.slots.get_mut(b).and_then(|v| v.pop()) {
            Some(s) => s,
            None => return Err(invalid(format!("box {:?}x{:?} is not present", b.lo, b.hi))),
        };
        if self.slots.get(b).is_some_and(|v| v.is_empty()) {
            self.slots.remove(b);
        }
        self.tree.delete(&self.image(b))?;
        let last = self.boxes.len() - 1;
        if slot != last {
            let moved = self.boxes[last].clone();
            let v = self.slots.get_mut(&moved).unwrap();
            let pos = v.iter().position(|&x| x == last).unwrap();
            v[pos] = slot;
        }
        self.boxes.swap_remove(slot);
        self.tick()
    }

    fn solve(&mut self, boxes: &[BoxD]) -> Result<Vec<PointD>> {
        self.solves += 1;
        solve_int_boxes(boxes, derive_seed(self.cfg.seed, "dynamic-solve", self.solves))
    }

    fn sample(&mut self, pool: &[BoxD], r: usize) -> Vec<BoxD> {
        if r >= pool.len() {
            return pool.to_vec();
        }
        let mut rng = sub_rng(self.cfg.seed, "dynamic-sample", self.solves);
        sample_indices(&mut rng, pool.len(), r)
            .into_iter()
            .map(|i| pool[i].clone())
            .collect()
    }

    /// Live boxes `points` misses, or `None` once more than `limit` show up.
    fn unpierced(&mut self, points: &[PointD], limit: f64) -> Option<Vec<BoxD>> {
        let n = self.boxes.len();
        if points.len() * points.len() > n {
            self.stats.direct_filters += 1;
            let t = RangeTree::build(2, points.to_vec());
            let out: Vec<BoxD> = self.boxes.iter().filter(|b| !t.any_in(b)).cloned().collect();
            return (out.len() as f64 <= limit).then_some(out);
        }
        let apexes: Vec<(i64, i64)> = match self.cfg.mode {
            Mode::Rectangles => points.iter().map(|p| (p[0], p[1])).collect(),
            Mode::Squares => points.iter().map(|p| (2 * p[0], 2 * p[1])).collect(),
        };
        let nodes = unpierced_canonical(&apexes, &self.tree);
        let mut out = Vec::new();
        for id in nodes {
            for (p, w) in self.tree.node_points(id) {
                for _ in 0..w {
                    out.push(self.preimage(&p));
                }
            }
            if out.len() as f64 > limit {
                return None;
            }
        }
        Some(out)
    }

    /// Rebuilds the piercing set. The previous set stays in place until a
    /// new one is complete.
    pub fn reconstruct(&mut self) -> Result<PiercingSolution> {
        self.stats.reconstructions += 1;
        self.solves = 0;
        let n = self.boxes.len();
        let mut k = 1usize;
        let points = 'search: loop {
            if n == 0 {
                break Vec::new();
            }
            let (r, limit) = match self.cfg.mode {
                Mode::Rectangles => {
                    let s = ((k * n) as f64).sqrt();
                    (self.cfg.c1 * s, self.cfg.c2 * s)
                }
                Mode::Squares => {
                    let s = (k as f64).powf(2.0 / 3.0) * (n as f64).cbrt();
                    (self.cfg.c1 * s, self.cfg.c2 * s)
                }
            };
            let r = r.ceil() as usize;
            if r >= n {
                let all = self.boxes.clone();
                break self.solve(&all)?;
            }
            for _ in 0..=self.cfg.max_restarts {
                let all = self.boxes.clone();
                let first = self.sample(&all, r);
                let mut p = self.solve(&first)?;
                if p.len() as f64 > too_large(k) {
                    break;
                }
                if self.cfg.mode == Mode::Squares {
                    // middle round: solve a sample of what the first round missed
                    let missed = self.unpierced(&p, f64::INFINITY).unwrap_or_default();
                    let second = self.sample(&missed, r);
                    let q = self.solve(&second)?;
                    if q.len() as f64 > too_large(k) {
                        break;
                    }
                    p.extend(q);
                }
                match self.unpierced(&p, limit) {
                    Some(rest) => {
                        let q = self.solve(&rest)?;
                        p.extend(q);
                        break 'search p;
                    }
                    None => self.stats.restarts += 1,
                }
            }
            self.stats.escalations += 1;
            k *= 2;
        };
        let mut points = points;
        dedup_points(&mut points);
        self.s = points.len();
        self.since = 0;
        self.set_points(points.clone());
        let mut sol = PiercingSolution::new(points, "dynamic", self.cfg.seed);
        sol.stat("k_final", k as u64);
        sol.stat("n", n as u64);
        Ok(sol)
    }
}
