//! Running a solver on an instance file and checking its answer.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use crate::classic::{dnc_pierce, greedy_interval_pierce};
use crate::error::{usage, Error, Result};
use crate::eps_net::NetConfig;
use crate::geom::{exact_piercing, verify_piercing, verify_piercing_raw, ExactCap, PiercingSolution, ProblemInstance};
use crate::harness::format::{InstanceFile, RunReport, SolutionFile};
use crate::multiround::{multi_round_pierce, two_round_2d, MultiRoundConfig, TwoRoundConfig};
use crate::mwu::{basic_mwu, improved_mwu, BasicMwuConfig, ImprovedMwuConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algo {
    Greedy1d,
    Dnc,
    BasicMwu,
    ImprovedMwu,
    Multiround(usize),
    TwoRound2d,
    Exact,
}

impl Algo {
    pub const NAMES: [&'static str; 7] = [
        "greedy1d",
        "dnc",
        "basic-mwu",
        "improved-mwu",
        "multiround:r",
        "two-round-2d",
        "exact",
    ];
}

impl fmt::Display for Algo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Algo::Greedy1d => write!(f, "greedy1d"),
            Algo::Dnc => write!(f, "dnc"),
            Algo::BasicMwu => write!(f, "basic-mwu"),
            Algo::ImprovedMwu => write!(f, "improved-mwu"),
            Algo::Multiround(r) => write!(f, "multiround:{r}"),
            Algo::TwoRound2d => write!(f, "two-round-2d"),
            Algo::Exact => write!(f, "exact"),
        }
    }
}

impl FromStr for Algo {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "greedy1d" => Algo::Greedy1d,
            "dnc" => Algo::Dnc,
            "basic-mwu" => Algo::BasicMwu,
            "improved-mwu" => Algo::ImprovedMwu,
            "multiround" => Algo::Multiround(2),
            "two-round-2d" => Algo::TwoRound2d,
            "exact" => Algo::Exact,
            _ => match s.strip_prefix("multiround:").map(str::parse::<usize>) {
                Some(Ok(r)) if r >= 1 => Algo::Multiround(r),
                _ => {
                    return Err(usage(format!(
                        "unknown algorithm {s:?}; expected one of {}",
                        Algo::NAMES.join(", ")
                    )))
                }
            },
        })
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SolveOptions {
    pub algo: Algo,
    pub seed: u64,
    /// Overrides the round count of `multiround`.
    pub rounds: Option<usize>,
    /// Sample constant of the weak ε-nets.
    pub alpha: Option<f64>,
    pub exact_cap: ExactCap,
    /// Run the exact oracle for the ratio when the instance is small enough.
    pub with_oracle: bool,
}

impl SolveOptions {
    pub fn new(algo: Algo, seed: u64) -> Self {
        SolveOptions {
            algo,
            seed,
            rounds: None,
            alpha: None,
            exact_cap: ExactCap::default(),
            with_oracle: false,
        }
    }

    fn net(&self) -> NetConfig {
        let mut net = NetConfig::default();
        if let Some(a) = self.alpha {
            net.alpha = a;
        }
        net
    }
}

/// Runs the chosen solver on a normalized instance, without verification.
pub fn run_algo(inst: &ProblemInstance, opts: &SolveOptions) -> Result<PiercingSolution> {
    let seed = opts.seed;
    match opts.algo {
        Algo::Greedy1d => {
            if inst.dimension != 1 {
                return Err(usage("greedy1d needs a one-dimensional instance"));
            }
            let iv: Vec<(i64, i64)> = inst.boxes.iter().map(|b| (b.lo[0], b.hi[0])).collect();
            let pts = greedy_interval_pierce(&iv).into_iter().map(|x| vec![x]).collect();
            Ok(PiercingSolution::new(pts, "greedy1d", seed))
        }
        Algo::Dnc => Ok(dnc_pierce(inst)),
        Algo::BasicMwu => basic_mwu(inst, &BasicMwuConfig { seed, net: opts.net(), ..Default::default() }),
        Algo::ImprovedMwu => improved_mwu(inst, &ImprovedMwuConfig { seed, net: opts.net(), ..Default::default() }),
        Algo::Multiround(r) => {
            let rounds = opts.rounds.unwrap_or(r);
            let mut sol = multi_round_pierce(inst, &MultiRoundConfig { rounds, seed, ..Default::default() })?;
            sol.algorithm = format!("multiround:{rounds}");
            Ok(sol)
        }
        Algo::TwoRound2d => two_round_2d(inst, &TwoRoundConfig { seed, ..Default::default() }),
        Algo::Exact => exact_piercing(inst, opts.exact_cap),
    }
}

/// Result of [`solve`]: the verified solution file and its run report.
#[derive(Debug, Clone)]
pub struct Solved {
    pub solution: SolutionFile,
    pub report: RunReport,
}

/// Normalizes, solves, verifies in both coordinate systems and reports.
/// Fails with [`Error::Unpierced`] rather than return an invalid answer.
pub fn solve(file: &InstanceFile, name: &str, opts: &SolveOptions) -> Result<Solved> {
    let inst = file.normalize()?;
    let start = Instant::now();
    let sol = run_algo(&inst, opts)?;
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;
    let missed = verify_piercing(&inst, &sol.points).len();
    if missed > 0 {
        return Err(Error::Unpierced(missed));
    }
    let points: Vec<Vec<f64>> = sol.points.iter().map(|p| inst.denormalize_point(p)).collect();
    let missed = verify_piercing_raw(&file.boxes, &points).len();
    if missed > 0 {
        return Err(Error::Unpierced(missed));
    }
    let optimal = match file.meta.p_exact {
        Some(p) => Some(p),
        None if opts.with_oracle && inst.len() <= opts.exact_cap.max_boxes => {
            exact_piercing(&inst, opts.exact_cap).ok().map(|s| s.size())
        }
        None => None,
    };
    let size = sol.size();
    let report = RunReport {
        instance: name.to_string(),
        algorithm: sol.algorithm.clone(),
        seed: opts.seed,
        n: inst.len(),
        d: inst.dimension,
        size,
        optimal,
        ratio: optimal.map(|o| if o == 0 { 1.0 } else { size as f64 / o as f64 }),
        wall_ms,
        counters: sol.stats.clone(),
    };
    Ok(Solved {
        solution: SolutionFile::new(&sol.algorithm, opts.seed, points, sol.stats),
        report,
    })
}

/// Indices of boxes in `file` that no point of `sol` pierces.
pub fn verify_files(file: &InstanceFile, sol: &SolutionFile) -> Result<Vec<usize>> {
    if sol.points.iter().any(|p| p.len() != file.dimension) {
        return Err(usage("solution points do not match the instance dimension"));
    }
    Ok(verify_piercing_raw(&file.boxes, &sol.points))
}
