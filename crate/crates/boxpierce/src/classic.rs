//! Exact interval routines and the divide-and-conquer approximations for
//! piercing and independent sets of boxes.
//!
//! Both d-dimensional routines split at the median endpoint of the first
//! axis. Boxes crossing the median hyperplane all contain it, so they are
//! projected onto it and handled one dimension lower; the rest are split
//! into a left and a right half and recursed on.

use crate::geom::{BoxD, PiercingSolution, PointD, ProblemInstance};

/// Minimum piercing set of closed intervals.
pub fn greedy_interval_pierce(intervals: &[(i64, i64)]) -> Vec<i64> {
    let mut order: Vec<usize> = (0..intervals.len()).collect();
    order.sort_by_key(|&i| (intervals[i].1, intervals[i].0));
    let mut out: Vec<i64> = Vec::new();
    for i in order {
        let (lo, _) = intervals[i];
        if out.last().map_or(true, |&x| x < lo) {
            out.push(intervals[i].1);
        }
    }
    out
}

/// Maximum set of pairwise-disjoint intervals, as indices.
pub fn greedy_interval_independent(intervals: &[(i64, i64)]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..intervals.len()).collect();
    order.sort_by_key(|&i| (intervals[i].1, intervals[i].0));
    let mut out = Vec::new();
    let mut last: Option<i64> = None;
    for i in order {
        if last.map_or(true, |x| x < intervals[i].0) {
            last = Some(intervals[i].1);
            out.push(i);
        }
    }
    out
}

fn median_endpoint(boxes: &[BoxD], idx: &[usize]) -> i64 {
    let mut ends: Vec<i64> = idx
        .iter()
        .flat_map(|&i| [boxes[i].lo[0], boxes[i].hi[0]])
        .collect();
    let mid = ends.len() / 2;
    *ends.select_nth_unstable(mid).1
}

/// Splits `idx` into (left, crossing, right) around `m` on axis 0.
fn split(boxes: &[BoxD], idx: Vec<usize>, m: i64) -> (Vec<usize>, Vec<usize>, Vec<usize>) {
    let mut left = Vec::new();
    let mut cross = Vec::new();
    let mut right = Vec::new();
    for i in idx {
        let b = &boxes[i];
        if b.hi[0] < m {
            left.push(i);
        } else if b.lo[0] > m {
            right.push(i);
        } else {
            cross.push(i);
        }
    }
    (left, cross, right)
}

fn pierce_rec(boxes: &[BoxD], idx: Vec<usize>, out: &mut Vec<PointD>) {
    if idx.is_empty() {
        return;
    }
    if boxes[idx[0]].dim() == 1 {
        let iv: Vec<(i64, i64)> = idx.iter().map(|&i| (boxes[i].lo[0], boxes[i].hi[0])).collect();
        out.extend(greedy_interval_pierce(&iv).into_iter().map(|x| vec![x]));
        return;
    }
    let m = median_endpoint(boxes, &idx);
    let (left, cross, right) = split(boxes, idx, m);
    let proj: Vec<BoxD> = cross.iter().map(|&i| boxes[i].project_out(0)).collect();
    for mut p in dnc_pierce_points(&proj) {
        p.insert(0, m);
        out.push(p);
    }
    pierce_rec(boxes, left, out);
    pierce_rec(boxes, right, out);
}

/// Piercing points from the divide-and-conquer scheme; `O(p log^{d-1} n)`
/// of them.
pub fn dnc_pierce_points(boxes: &[BoxD]) -> Vec<PointD> {
    let mut out = Vec::new();
    pierce_rec(boxes, (0..boxes.len()).collect(), &mut out);
    out
}

pub fn dnc_pierce(inst: &ProblemInstance) -> PiercingSolution {
    PiercingSolution::new(dnc_pierce_points(&inst.boxes), "dnc", 0)
}

fn indep_rec(boxes: &[BoxD], idx: Vec<usize>, depth: usize, groups: &mut Vec<Vec<usize>>) {
    if idx.is_empty() {
        return;
    }
    let m = median_endpoint(boxes, &idx);
    let (left, cross, right) = split(boxes, idx, m);
    let proj: Vec<BoxD> = cross.iter().map(|&i| boxes[i].project_out(0)).collect();
    if groups.len() <= depth {
        groups.resize(depth + 1, Vec::new());
    }
    groups[depth].extend(dnc_independent_indices(&proj).into_iter().map(|j| cross[j]));
    indep_rec(boxes, left, depth + 1, groups);
    indep_rec(boxes, right, depth + 1, groups);
}

/// Pairwise-disjoint subset (as indices) of size `Omega(alpha / log^{d-1} n)`.
///
/// Boxes handled at the same recursion depth live in disjoint slabs, so the
/// crossing solutions of one depth can be merged; the largest merged group
/// is returned.
pub fn dnc_independent_indices(boxes: &[BoxD]) -> Vec<usize> {
    if boxes.is_empty() {
        return Vec::new();
    }
    if boxes[0].dim() == 1 {
        let iv: Vec<(i64, i64)> = boxes.iter().map(|b| (b.lo[0], b.hi[0])).collect();
        return greedy_interval_independent(&iv);
    }
    let mut groups = Vec::new();
    indep_rec(boxes, (0..boxes.len()).collect(), 0, &mut groups);
    let mut best: Vec<usize> = Vec::new();
    for g in groups {
        if g.len() > best.len() {
            best = g;
        }
    }
    best.sort_unstable();
    best
}

/// Pairwise-disjoint subset (as indices) picked greedily, smallest box first.
pub fn greedy_independent_indices(boxes: &[BoxD]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..boxes.len()).collect();
    let size = |b: &BoxD| -> f64 { (0..b.dim()).map(|a| (b.hi[a] - b.lo[a]) as f64).product() };
    order.sort_by(|&i, &j| size(&boxes[i]).total_cmp(&size(&boxes[j])).then(i.cmp(&j)));
    let mut chosen: Vec<usize> = Vec::new();
    for i in order {
        if chosen.iter().all(|&c| !boxes[c].intersects(&boxes[i])) {
            chosen.push(i);
        }
    }
    chosen.sort_unstable();
    chosen
}

/// Size of the larger of the greedy and divide-and-conquer disjoint
/// subfamilies; a lower bound on the piercing number.
pub fn independent_lower_bound(boxes: &[BoxD]) -> usize {
    greedy_independent_indices(boxes)
        .len()
        .max(dnc_independent_indices(boxes).len())
}

pub fn dnc_independent(inst: &ProblemInstance) -> Vec<BoxD> {
    dnc_independent_indices(&inst.boxes)
        .into_iter()
        .map(|i| inst.boxes[i].clone())
        .collect()
}
