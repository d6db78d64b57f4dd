//! Grid runs over (n, d, kind, algorithm, seed).

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::harness::format::{InstanceFile, RunReport};
use crate::harness::generate::{generate, GenParams, Kind};
use crate::harness::solve::{solve, Algo, SolveOptions};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchMatrix {
    pub n: Vec<usize>,
    pub d: Vec<usize>,
    pub kind: Vec<String>,
    pub algo: Vec<String>,
    pub seeds: Vec<u64>,
    /// Plant count for planted instances.
    #[serde(default)]
    pub k: Option<usize>,
}

/// Runs every cell of the matrix in a fixed order. A seed drives both the
/// generator and the solver.
pub fn run_bench(m: &BenchMatrix) -> Result<Vec<RunReport>> {
    let kinds: Vec<Kind> = m.kind.iter().map(|k| k.parse()).collect::<Result<_>>()?;
    let algos: Vec<Algo> = m.algo.iter().map(|a| a.parse()).collect::<Result<_>>()?;
    let mut out = Vec::new();
    for &kind in &kinds {
        for &d in &m.d {
            for &n in &m.n {
                for &seed in &m.seeds {
                    let g = generate(kind, GenParams { k: m.k, ..GenParams::new(n, d) }, seed)?;
                    let file = InstanceFile::from_generated(g);
                    let name = format!("{}:n={n}:d={d}:seed={seed}", kind.name());
                    for &algo in &algos {
                        out.push(solve(&file, &name, &SolveOptions::new(algo, seed))?.report);
                    }
                }
            }
        }
    }
    Ok(out)
}
