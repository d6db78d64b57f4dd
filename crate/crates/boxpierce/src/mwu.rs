//! Multiplicative-weights piercing.
//!
//! [`basic_mwu`] keeps doubling weights on the arrangement vertices until
//! every box is heavy and then takes a weak ε-net. [`improved_mwu`] works on
//! a sample of the weighted vertices instead: light boxes are detected by
//! range counting on the sample, and a large independent set of light boxes
//! is doubled per round.

use rand::Rng as _;

use crate::arrangement::{batch_sample, batch_sample_with_total, sweep_structure, ArrangementDs};
use crate::classic::{dnc_independent_indices, dnc_pierce_points, greedy_interval_pierce, independent_lower_bound};
use crate::eps_net::{weak_net_for_boxes, weak_net_from_sample, sample_size, NetConfig};
use crate::error::{Error, Result};
use crate::geom::{dedup_points, prune_redundant, unpierced_indices, BoxD, PiercingSolution, PointD, ProblemInstance};
use crate::range_tree::RangeTree;
use crate::rng::{sub_rng, Rng};
use crate::weight::{ExpFloat, Weight};

#[derive(Debug, Clone, Copy)]
pub struct BasicMwuConfig {
    pub seed: u64,
    /// Round budget constant: `τ = c ln((2n)^d / k)`.
    pub c: f64,
    /// First guess for the piercing number.
    pub k0: usize,
    pub net: NetConfig,
    pub net_retries: usize,
    /// End a stage as soon as its total weight proves `p > k`.
    pub certify: bool,
    /// Drop redundant points from the final set.
    pub prune: bool,
}

impl Default for BasicMwuConfig {
    fn default() -> Self {
        BasicMwuConfig {
            seed: 0,
            c: 8.0,
            k0: 2,
            net: NetConfig::default(),
            net_retries: 3,
            certify: true,
            prune: true,
        }
    }
}

/// Parameters of one stage of the basic algorithm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StageParams {
    pub k: usize,
    pub eps: f64,
    pub ell: usize,
    pub tau: usize,
}

impl StageParams {
    pub fn new(k: usize, n: usize, d: usize, c: f64) -> Self {
        let eps = 2.0 / (3.0 * k as f64);
        let ell = (1.0 / eps).floor().max(1.0) as usize;
        let log_v = d as f64 * (2.0 * n as f64).ln() - (k as f64).ln();
        let tau = (c * log_v).ceil().max(1.0) as usize;
        StageParams { k, eps, ell, tau }
    }
}

/// What happened in one stage.
#[derive(Debug, Clone, PartialEq)]
pub struct StageLog {
    pub params: StageParams,
    pub rounds: usize,
    pub doublings: usize,
    /// `log2` of the total weight before the first doubling and after each one.
    pub log2_weights: Vec<f64>,
    pub completed: bool,
}

#[derive(Debug, Clone)]
pub struct MwuTrace {
    pub solution: PiercingSolution,
    pub stages: Vec<StageLog>,
}

/// True when `log2_w < log2(q) + ⌊doublings/q⌋` for every `q ≤ k`, which
/// rules out a piercing set of size at most `k`.
fn exceeds_all_below(log2_w: f64, doublings: usize, k: usize) -> bool {
    (1..=k).all(|q| log2_w < (q as f64).log2() + (doublings / q) as f64)
}

fn finish(boxes: &[BoxD], mut points: Vec<PointD>, prune: bool, sol: &mut PiercingSolution) {
    dedup_points(&mut points);
    sol.stat("raw_size", points.len() as u64);
    if prune {
        prune_redundant(boxes, &mut points);
    }
    sol.points = points;
}

/// Adds the low corner of every box that `points` misses.
fn fix_up(boxes: &[BoxD], points: &mut Vec<PointD>) -> usize {
    let missed = unpierced_indices(boxes, points);
    for &i in &missed {
        points.push(boxes[i].lo.clone());
    }
    missed.len()
}

pub fn basic_mwu(inst: &ProblemInstance, cfg: &BasicMwuConfig) -> Result<PiercingSolution> {
    Ok(basic_mwu_traced(inst, cfg)?.solution)
}

/// [`basic_mwu`] together with the per-stage weight telemetry.
pub fn basic_mwu_traced(inst: &ProblemInstance, cfg: &BasicMwuConfig) -> Result<MwuTrace> {
    let n = inst.len();
    let d = inst.dimension;
    let mut sol = PiercingSolution::new(Vec::new(), "basic-mwu", cfg.seed);
    let mut stages = Vec::new();
    if n == 0 {
        return Ok(MwuTrace { solution: sol, stages });
    }
    let boxes = &inst.boxes;
    let mut pristine = ArrangementDs::<ExpFloat>::build(d, boxes.clone())?;
    for i in 0..n {
        pristine.insert(i)?;
    }
    let mut sweep = if d >= 2 { Some(sweep_structure::<ExpFloat>(boxes)?) } else { None };
    let mut k = cfg.k0.max(1);
    // a stage with 3k < 2|I| for a disjoint family I can never make every box heavy
    let alpha = independent_lower_bound(boxes);
    while 3 * k < 2 * alpha {
        k *= 2;
        sol.bump("skipped_stages", 1);
    }
    let mut total_doublings = 0u64;
    for stage in 0.. {
        if k > 2 * n {
            // every guess failed; the boxes' corners always work
            let pts: Vec<PointD> = boxes.iter().map(|b| b.lo.clone()).collect();
            sol.stat("fallback", 1);
            finish(boxes, pts, cfg.prune, &mut sol);
            return Ok(MwuTrace { solution: sol, stages });
        }
        let params = StageParams::new(k, n, d, cfg.c);
        let mut rng = sub_rng(cfg.seed, "basic-mwu-stage", stage);
        let mut ds = pristine.clone();
        let mut log = StageLog {
            params,
            rounds: 0,
            doublings: 0,
            log2_weights: vec![ds.total().log2()],
            completed: false,
        };
        let mut cursor = 0usize;
        // weights only grow within a stage, so a stale weight is a lower bound
        let mut known = vec![ExpFloat::zero(); n];
        while log.rounds < params.tau {
            log.rounds += 1;
            let mut round_doublings = 0;
            let mut aborted = false;
            'scan: for step in 0..n {
                let i = (cursor + step) % n;
                loop {
                    let total = ds.total();
                    if known[i].at_least(params.eps, &total) {
                        break;
                    }
                    let w = ds.weight(&boxes[i]);
                    known[i] = w;
                    if w.at_least(params.eps, &total) {
                        break;
                    }
                    if round_doublings == params.ell {
                        aborted = true;
                        cursor = i;
                        break 'scan;
                    }
                    ds.double(i)?;
                    known[i] = w.mul_pow2(1);
                    round_doublings += 1;
                    log.doublings += 1;
                    log.log2_weights.push(ds.total().log2());
                }
            }
            if aborted {
                if cfg.certify && exceeds_all_below(ds.total().log2(), log.doublings, k) {
                    sol.bump("certified_aborts", 1);
                    break;
                }
                continue;
            }
            log.completed = true;
            break;
        }
        total_doublings += log.doublings as u64;
        sol.bump("rounds", log.rounds as u64);
        if !log.completed {
            stages.push(log);
            k *= 2;
            continue;
        }
        // every box is (eps/e)-heavy now
        let net_eps = params.eps / std::f64::consts::E;
        let mut points = None;
        for attempt in 0..=cfg.net_retries {
            let got = match sweep.as_mut() {
                Some(sw) if boxes.len() as f64 > 1.0 / net_eps => {
                    let mult: Vec<u32> = (0..n).map(|i| ds.multiplicity(i)).collect();
                    let rho = sample_size(net_eps, cfg.net.alpha);
                    let q = batch_sample(sw, boxes, &mult, rho, &mut rng)?;
                    weak_net_from_sample(&q, net_eps, boxes, &cfg.net, &mut rng)
                }
                _ => weak_net_for_boxes(|r| ds.sample(r), net_eps, boxes, &cfg.net, &mut rng),
            };
            match got {
                Ok(out) if unpierced_indices(boxes, &out.points).is_empty() => {
                    sol.stat("net_size", out.points.len() as u64);
                    sol.stat("net_witnesses", out.stats.witnesses as u64);
                    points = Some(out.points);
                    break;
                }
                Ok(_) | Err(Error::SamplingFailure(_)) => {
                    if attempt < cfg.net_retries {
                        sol.bump("net_retries", 1);
                    }
                }
                Err(e) => return Err(e),
            }
        }
        let mut points = match points {
            Some(p) => p,
            None => {
                let mut p = weak_net_for_boxes(|r| ds.sample(r), net_eps, boxes, &cfg.net, &mut rng)
                    .map(|o| o.points)
                    .unwrap_or_default();
                let fixed = fix_up(boxes, &mut p);
                sol.stat("net_fixups", fixed as u64);
                p
            }
        };
        stages.push(log);
        dedup_points(&mut points);
        sol.stat("k_final", k as u64);
        sol.stat("stages", stage + 1);
        sol.stat("doublings", total_doublings);
        finish(boxes, points, cfg.prune, &mut sol);
        return Ok(MwuTrace { solution: sol, stages });
    }
    unreachable!()
}

#[derive(Debug, Clone, Copy)]
pub struct ImprovedMwuConfig {
    pub seed: u64,
    /// Sample size `r = ⌈c_r k log2 n⌉`.
    pub c_r: f64,
    /// Small-independent-set threshold `c1 k / log^{2d-1} n`.
    pub c1: f64,
    /// Round cap `c2 log^{2d} n` per guess.
    pub c2: f64,
    /// Doubling budget `c_d k ln((2n)^d)` per guess. When `k >= p` the
    /// weight of an optimal point outgrows the total weight beyond about
    /// `2.26 k ln |V|` doublings, so exceeding the budget means `k < p`.
    pub c_d: f64,
    /// Escalate `k` as soon as the total weight proves `p > k`.
    pub certify: bool,
    /// Also stop once the light boxes can be pierced by this many times `k`
    /// points.
    pub light_pierce_factor: f64,
    pub net: NetConfig,
    pub max_retries: usize,
    pub prune: bool,
}

impl Default for ImprovedMwuConfig {
    fn default() -> Self {
        ImprovedMwuConfig {
            seed: 0,
            c_r: 200.0,
            c1: 1.0,
            c2: 4.0,
            c_d: 2.5,
            certify: true,
            light_pierce_factor: 1.0,
            net: NetConfig::default(),
            max_retries: 5,
            prune: true,
        }
    }
}

/// Weighted sample of the arrangement: distinct points with multiplicities.
struct Sample {
    points: Vec<PointD>,
    tree: RangeTree,
    size: usize,
    log2_total: f64,
}

fn take_sample(
    sweep: &mut ArrangementDs<ExpFloat>,
    boxes: &[BoxD],
    mult: &[u32],
    r: usize,
    rng: &mut Rng,
) -> Result<Sample> {
    let (mut pts, total) = batch_sample_with_total(sweep, boxes, mult, r, rng)?;
    let d = boxes[0].dim();
    let size = pts.len();
    let raw = pts.clone();
    pts.sort();
    let mut distinct: Vec<PointD> = Vec::new();
    let mut weights: Vec<u64> = Vec::new();
    for p in pts {
        if distinct.last() == Some(&p) {
            *weights.last_mut().unwrap() += 1;
        } else {
            distinct.push(p);
            weights.push(1);
        }
    }
    Ok(Sample {
        points: raw,
        tree: RangeTree::build_weighted(d, distinct, weights),
        size,
        log2_total: total.log2(),
    })
}

/// `|b ∩ R| <= |R| / 4k` for every box.
fn light_flags(sample: &Sample, boxes: &[BoxD], k: usize) -> Vec<bool> {
    let limit = sample.size as f64 / (4.0 * k as f64);
    boxes
        .iter()
        .map(|b| sample.tree.count(b) as f64 <= limit)
        .collect()
}

/// Light-box test of the improved algorithm on its own: draws `r` vertices
/// under the weights induced by `mult` and flags the boxes holding at most a
/// `1/4k` share of the draws.
pub fn classify_light(boxes: &[BoxD], mult: &[u32], k: usize, r: usize, rng: &mut Rng) -> Result<Vec<bool>> {
    let mut sweep = sweep_structure::<ExpFloat>(boxes)?;
    let sample = take_sample(&mut sweep, boxes, mult, r, rng)?;
    Ok(light_flags(&sample, boxes, k.max(1)))
}

pub fn improved_mwu(inst: &ProblemInstance, cfg: &ImprovedMwuConfig) -> Result<PiercingSolution> {
    let n = inst.len();
    let d = inst.dimension;
    let mut sol = PiercingSolution::new(Vec::new(), "improved-mwu", cfg.seed);
    if n == 0 {
        return Ok(sol);
    }
    let boxes = &inst.boxes;
    if d == 1 {
        let iv: Vec<(i64, i64)> = boxes.iter().map(|b| (b.lo[0], b.hi[0])).collect();
        sol.points = greedy_interval_pierce(&iv).into_iter().map(|x| vec![x]).collect();
        return Ok(sol);
    }
    let logn = (n as f64).log2().max(1.0);
    let small_i = cfg.c1 / logn.powi(2 * d as i32 - 1);
    let round_cap = (cfg.c2 * logn.powi(2 * d as i32)).ceil() as usize;
    let mut sweep = sweep_structure::<ExpFloat>(boxes)?;
    let mut k = 1usize;
    let alpha = independent_lower_bound(boxes);
    while 2 * k <= alpha {
        k *= 2;
    }
    let mut mult = vec![0u32; n];
    let mut rounds_this_guess = 0usize;
    let mut doublings_this_guess = 0usize;
    let doubling_budget = cfg.c_d * d as f64 * (2.0 * n as f64).ln();
    let mut retries = 0usize;
    let mut round = 0u64;
    loop {
        round += 1;
        let mut rng = sub_rng(cfg.seed, "improved-mwu-round", round);
        if k > 2 * n {
            let pts: Vec<PointD> = boxes.iter().map(|b| b.lo.clone()).collect();
            sol.stat("fallback", 1);
            finish(boxes, pts, cfg.prune, &mut sol);
            return Ok(sol);
        }
        let r = (cfg.c_r * k as f64 * logn).ceil() as usize;
        let sample = take_sample(&mut sweep, boxes, &mult, r, &mut rng)?;
        let doubled: usize = mult.iter().map(|&m| m as usize).sum();
        if cfg.certify && doubled > 0 && exceeds_all_below(sample.log2_total, doubled, k) {
            sol.bump("certified_escalations", 1);
            k *= 2;
            mult.iter_mut().for_each(|m| *m = 0);
            rounds_this_guess = 0;
            doublings_this_guess = 0;
            continue;
        }
        let light: Vec<usize> = light_flags(&sample, boxes, k)
            .into_iter()
            .enumerate()
            .filter_map(|(i, l)| l.then_some(i))
            .collect();
        let light_boxes: Vec<BoxD> = light.iter().map(|&i| boxes[i].clone()).collect();
        let indep = dnc_independent_indices(&light_boxes);
        if indep.len() >= 2 * k {
            sol.bump("branch_a", 1);
            k *= 2;
            mult.iter_mut().for_each(|m| *m = 0);
            rounds_this_guess = 0;
            doublings_this_guess = 0;
            continue;
        }
        let p_light = dnc_pierce_points(&light_boxes);
        let finished = (indep.len() as f64) < small_i * k as f64
            || p_light.len() as f64 <= cfg.light_pierce_factor * k as f64;
        if finished {
            sol.bump("branch_b", 1);
            let is_light = {
                let mut v = vec![false; n];
                light.iter().for_each(|&i| v[i] = true);
                v
            };
            let heavy: Vec<BoxD> = (0..n).filter(|&i| !is_light[i]).map(|i| boxes[i].clone()).collect();
            let eps = 1.0 / (4.01 * k as f64);
            let pts = &sample.points;
            let net = weak_net_for_boxes(
                |r: &mut Rng| Ok(pts[r.gen_range(0..pts.len())].clone()),
                eps,
                &heavy,
                &cfg.net,
                &mut rng,
            );
            let mut points = p_light;
            match net {
                Ok(out) => {
                    sol.stat("net_size", out.points.len() as u64);
                    points.extend(out.points);
                }
                Err(Error::SamplingFailure(_)) => {}
                Err(e) => return Err(e),
            }
            if !unpierced_indices(boxes, &points).is_empty() {
                if retries < cfg.max_retries {
                    retries += 1;
                    sol.bump("retries", 1);
                    continue;
                }
                let fixed = fix_up(boxes, &mut points);
                sol.stat("net_fixups", fixed as u64);
            }
            sol.stat("k_final", k as u64);
            sol.stat("rounds", round);
            sol.stat("doublings", mult.iter().map(|&m| m as u64).sum());
            finish(boxes, points, cfg.prune, &mut sol);
            return Ok(sol);
        }
        sol.bump("branch_c", 1);
        for &j in &indep {
            mult[light[j]] += 1;
        }
        rounds_this_guess += 1;
        doublings_this_guess += indep.len();
        let over_budget = doublings_this_guess as f64 > doubling_budget * k as f64;
        if over_budget {
            sol.bump("doubling_cap_hits", 1);
        }
        if rounds_this_guess > round_cap {
            sol.bump("round_cap_hits", 1);
        }
        if over_budget || rounds_this_guess > round_cap {
            doublings_this_guess = 0;
            k *= 2;
            mult.iter_mut().for_each(|m| *m = 0);
            rounds_this_guess = 0;
        }
    }
}
