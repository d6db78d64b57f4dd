//! Multi-round sampling.
//!
//! Each round solves a random sample of the boxes that are still unpierced
//! and keeps the boxes the sample's solution misses. When the sample is
//! large enough compared to the guess `k`, only a `δ` fraction of the boxes
//! survives a round, so after `r - 1` rounds the remainder is small enough
//! to solve directly.

use rand::seq::index::sample as sample_indices;

use crate::classic::{dnc_pierce, independent_lower_bound};
use crate::error::{usage, Result};
use crate::geom::{dedup_points, PiercingSolution, PointD, ProblemInstance};
use crate::mwu::{basic_mwu, improved_mwu, BasicMwuConfig, ImprovedMwuConfig};
use crate::range_tree::RangeTree;
use crate::rng::{derive_seed, sub_rng};

/// Solver run on samples and on the final remainder.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Inner {
    Dnc,
    BasicMwu,
    #[default]
    ImprovedMwu,
}

impl Inner {
    pub fn solve(self, inst: &ProblemInstance, seed: u64) -> Result<PiercingSolution> {
        match self {
            Inner::Dnc => Ok(dnc_pierce(inst)),
            Inner::BasicMwu => basic_mwu(inst, &BasicMwuConfig { seed, ..Default::default() }),
            Inner::ImprovedMwu => improved_mwu(inst, &ImprovedMwuConfig { seed, ..Default::default() }),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct MultiRoundConfig {
    pub rounds: usize,
    pub seed: u64,
    pub inner: Inner,
    /// Sample size multiplier in `m = c k δ⁻¹ ln n`; `None` means `4d`.
    pub sample_factor: Option<f64>,
    /// Repeats of one round before the guess is doubled.
    pub max_repeats: usize,
}

impl Default for MultiRoundConfig {
    fn default() -> Self {
        MultiRoundConfig {
            rounds: 2,
            seed: 0,
            inner: Inner::default(),
            sample_factor: None,
            max_repeats: 4,
        }
    }
}

/// A round's solution is too large for guess `k` beyond this size.
pub fn too_large(k: usize) -> f64 {
    8.0 * k as f64 * (k as f64 + 4.0).log2().log2().max(1.0)
}

/// Indices of `boxes[idx]` that contain none of `points`.
fn unpierced_among(inst: &ProblemInstance, idx: &[usize], points: &[PointD]) -> Vec<usize> {
    if points.is_empty() {
        return idx.to_vec();
    }
    let tree = RangeTree::build(inst.dimension, points.to_vec());
    idx.iter()
        .copied()
        .filter(|&i| !tree.any_in(&inst.boxes[i]))
        .collect()
}

fn label(rounds: usize) -> String {
    format!("multiround:{rounds}")
}

enum Attempt {
    Done(Vec<PointD>, Vec<usize>),
    Escalate,
}

pub fn multi_round_pierce(inst: &ProblemInstance, cfg: &MultiRoundConfig) -> Result<PiercingSolution> {
    if cfg.rounds == 0 {
        return Err(usage("at least one round is needed"));
    }
    if cfg.rounds == 1 {
        let mut sol = cfg.inner.solve(inst, cfg.seed)?;
        sol.algorithm = label(1);
        return Ok(sol);
    }
    let n = inst.len();
    let mut sol = PiercingSolution::new(Vec::new(), &label(cfg.rounds), cfg.seed);
    if n == 0 {
        return Ok(sol);
    }
    let c = cfg.sample_factor.unwrap_or(4.0 * inst.dimension as f64);
    let mut k = independent_lower_bound(&inst.boxes).max(1);
    let mut calls = 0u64;
    loop {
        match attempt(inst, cfg, c, k, &mut calls, &mut sol)? {
            Attempt::Done(mut points, residuals) => {
                for (i, r) in residuals.iter().enumerate() {
                    sol.stat(&format!("residual_{}", i + 1), *r as u64);
                }
                sol.stat("k_final", k as u64);
                dedup_points(&mut points);
                sol.points = points;
                return Ok(sol);
            }
            Attempt::Escalate => {
                sol.bump("restarts", 1);
                k *= 2;
            }
        }
    }
}

fn attempt(
    inst: &ProblemInstance,
    cfg: &MultiRoundConfig,
    c: f64,
    k: usize,
    calls: &mut u64,
    sol: &mut PiercingSolution,
) -> Result<Attempt> {
    let n = inst.len();
    let delta = (k as f64 / n as f64).powf(1.0 / cfg.rounds as f64).min(1.0);
    let m = (c * k as f64 / delta * (n as f64).ln().max(1.0)).ceil() as usize;
    let mut alive: Vec<usize> = (0..n).collect();
    let mut points: Vec<PointD> = Vec::new();
    let mut residuals = Vec::new();
    for _ in 1..cfg.rounds {
        if alive.len() <= m {
            break;
        }
        let mut repeats = 0;
        loop {
            *calls += 1;
            let mut rng = sub_rng(cfg.seed, "multiround-sample", *calls);
            let picked: Vec<usize> = sample_indices(&mut rng, alive.len(), m)
                .into_iter()
                .map(|j| alive[j])
                .collect();
            let q = cfg
                .inner
                .solve(&inst.subset(&picked), derive_seed(cfg.seed, "multiround-inner", *calls))?;
            if q.size() as f64 > too_large(k) {
                return Ok(Attempt::Escalate);
            }
            let rest = unpierced_among(inst, &alive, &q.points);
            if rest.len() as f64 > delta * alive.len() as f64 {
                sol.bump("repeats", 1);
                repeats += 1;
                if repeats > cfg.max_repeats {
                    return Ok(Attempt::Escalate);
                }
                continue;
            }
            points.extend(q.points);
            residuals.push(rest.len());
            alive = rest;
            break;
        }
        sol.bump("rounds", 1);
    }
    if !alive.is_empty() {
        *calls += 1;
        let q = cfg
            .inner
            .solve(&inst.subset(&alive), derive_seed(cfg.seed, "multiround-inner", *calls))?;
        points.extend(q.points);
    }
    sol.bump("rounds", 1);
    Ok(Attempt::Done(points, residuals))
}

#[derive(Debug, Clone, Copy)]
pub struct TwoRoundConfig {
    pub seed: u64,
    /// The sample holds `n / log2(n)^gamma` boxes.
    pub gamma: f64,
    /// Multiplier in the residue bound `δ = c t ln n / m`.
    pub residue_factor: f64,
    pub max_resamples: usize,
}

impl Default for TwoRoundConfig {
    fn default() -> Self {
        TwoRoundConfig {
            seed: 0,
            gamma: 1.0,
            residue_factor: 8.0,
            max_resamples: 3,
        }
    }
}

/// Outcome of comparing the boxes a point set misses against `δn`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShrinkageReport {
    pub n: usize,
    pub unpierced: usize,
    pub bound: f64,
    pub violated: bool,
}

pub fn residual_shrinkage_check(inst: &ProblemInstance, q: &[PointD], delta: f64) -> ShrinkageReport {
    let all: Vec<usize> = (0..inst.len()).collect();
    let unpierced = unpierced_among(inst, &all, q).len();
    let bound = delta * inst.len() as f64;
    ShrinkageReport {
        n: inst.len(),
        unpierced,
        bound,
        violated: unpierced as f64 > bound,
    }
}

/// Planar two-round scheme: solve a sample, filter the boxes its solution
/// misses, and solve those.
pub fn two_round_2d(inst: &ProblemInstance, cfg: &TwoRoundConfig) -> Result<PiercingSolution> {
    if inst.dimension != 2 {
        return Err(usage("two-round solver is planar only"));
    }
    let n = inst.len();
    let mut sol = PiercingSolution::new(Vec::new(), "two-round-2d", cfg.seed);
    let solver = |sub: &ProblemInstance, label: &str, i: u64| {
        improved_mwu(
            sub,
            &ImprovedMwuConfig {
                seed: derive_seed(cfg.seed, label, i),
                ..Default::default()
            },
        )
    };
    let logn = (n.max(2) as f64).log2();
    let m = (n as f64 / logn.powf(cfg.gamma)).ceil() as usize;
    if m >= n || n < 100 {
        let mut s = solver(inst, "two-round-direct", 0)?;
        s.algorithm = sol.algorithm;
        return Ok(s);
    }
    let all: Vec<usize> = (0..n).collect();
    let mut attempt = 0u64;
    let (first, rest) = loop {
        let mut rng = sub_rng(cfg.seed, "two-round-sample", attempt);
        let picked: Vec<usize> = sample_indices(&mut rng, n, m).into_vec();
        let q = solver(&inst.subset(&picked), "two-round-first", attempt)?;
        let rest = unpierced_among(inst, &all, &q.points);
        let delta = (cfg.residue_factor * q.size() as f64 * (n as f64).ln() / m as f64).min(1.0);
        if rest.len() as f64 <= delta * n as f64 || attempt as usize >= cfg.max_resamples {
            break (q, rest);
        }
        sol.bump("resamples", 1);
        attempt += 1;
    };
    sol.stat("sample", m as u64);
    sol.stat("residual", rest.len() as u64);
    let mut points = first.points;
    if !rest.is_empty() {
        points.extend(solver(&inst.subset(&rest), "two-round-second", 0)?.points);
    }
    dedup_points(&mut points);
    sol.points = points;
    Ok(sol)
}
