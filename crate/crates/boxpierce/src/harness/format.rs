//! On-disk formats. Instances and solutions are JSON documents, dynamic
//! scripts are JSON lines, bench results are CSV. Schemas live in
//! `schemas/` at the repository root.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{usage, Result};
use crate::geom::{normalize_instance, BoxD, ProblemInstance, RawBox};
use crate::harness::generate::{Generated, InstanceMeta};

pub const INSTANCE_FORMAT: &str = "boxpierce-instance";
pub const SOLUTION_FORMAT: &str = "boxpierce-solution";
pub const VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub format: String,
    pub version: u32,
    pub dimension: usize,
    pub boxes: Vec<RawBox>,
    #[serde(default)]
    pub meta: InstanceMeta,
}

impl InstanceFile {
    pub fn new(dimension: usize, boxes: Vec<RawBox>, meta: InstanceMeta) -> Self {
        InstanceFile {
            format: INSTANCE_FORMAT.into(),
            version: VERSION,
            dimension,
            boxes,
            meta,
        }
    }

    pub fn from_generated(g: Generated) -> Self {
        let d = g.boxes.first().map_or(1, |b| b.lo.len());
        InstanceFile::new(d, g.boxes, g.meta)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let f: InstanceFile = serde_json::from_str(text).map_err(|e| usage(format!("instance file: {e}")))?;
        if f.format != INSTANCE_FORMAT {
            return Err(usage(format!("not an instance file (format {:?})", f.format)));
        }
        if f.boxes.iter().any(|b| b.lo.len() != f.dimension || b.hi.len() != f.dimension) {
            return Err(usage("box dimension differs from the declared dimension"));
        }
        Ok(f)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance serializes") + "\n"
    }

    pub fn normalize(&self) -> Result<ProblemInstance> {
        normalize_instance(&self.boxes)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionFile {
    pub format: String,
    pub version: u32,
    pub algorithm: String,
    pub seed: u64,
    pub size: usize,
    /// Points in the instance's own coordinates.
    pub points: Vec<Vec<f64>>,
    #[serde(default)]
    pub stats: BTreeMap<String, u64>,
}

impl SolutionFile {
    pub fn new(algorithm: &str, seed: u64, points: Vec<Vec<f64>>, stats: BTreeMap<String, u64>) -> Self {
        SolutionFile {
            format: SOLUTION_FORMAT.into(),
            version: VERSION,
            algorithm: algorithm.into(),
            seed,
            size: points.len(),
            points,
            stats,
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let f: SolutionFile = serde_json::from_str(text).map_err(|e| usage(format!("solution file: {e}")))?;
        if f.format != SOLUTION_FORMAT {
            return Err(usage(format!("not a solution file (format {:?})", f.format)));
        }
        Ok(f)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("solution serializes") + "\n"
    }
}

/// One line of an update script.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "lowercase")]
pub enum ScriptOp {
    Insert {
        #[serde(rename = "box")]
        b: BoxD,
    },
    Delete {
        #[serde(rename = "box")]
        b: BoxD,
    },
}

/// Parses a JSONL script; blank lines are skipped.
pub fn parse_script(text: &str) -> Result<Vec<ScriptOp>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let op: ScriptOp = serde_json::from_str(line).map_err(|e| usage(format!("line {}: {e}", i + 1)))?;
        let b = match &op {
            ScriptOp::Insert { b } | ScriptOp::Delete { b } => b,
        };
        if b.lo.len() != 2 || b.hi.len() != 2 {
            return Err(usage(format!("line {}: boxes must be planar", i + 1)));
        }
        out.push(op);
    }
    Ok(out)
}

pub fn script_to_jsonl(ops: &[ScriptOp]) -> String {
    ops.iter()
        .map(|op| serde_json::to_string(op).expect("op serializes") + "\n")
        .collect()
}

/// Summary of one solver run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub instance: String,
    pub algorithm: String,
    pub seed: u64,
    pub n: usize,
    pub d: usize,
    pub size: usize,
    pub optimal: Option<usize>,
    pub ratio: Option<f64>,
    pub wall_ms: f64,
    pub counters: BTreeMap<String, u64>,
}

pub const CSV_HEADER: [&str; 14] = [
    "instance",
    "algorithm",
    "seed",
    "n",
    "d",
    "size",
    "optimal",
    "ratio",
    "wall_ms",
    "rounds",
    "doublings",
    "restarts",
    "net_size",
    "valid",
];

impl RunReport {
    pub fn counter(&self, key: &str) -> u64 {
        self.counters.get(key).copied().unwrap_or(0)
    }

    pub fn csv_record(&self) -> Vec<String> {
        let opt = |v: Option<String>| v.unwrap_or_default();
        vec![
            self.instance.clone(),
            self.algorithm.clone(),
            self.seed.to_string(),
            self.n.to_string(),
            self.d.to_string(),
            self.size.to_string(),
            opt(self.optimal.map(|o| o.to_string())),
            opt(self.ratio.map(|r| format!("{r:.4}"))),
            format!("{:.3}", self.wall_ms),
            self.counter("rounds").to_string(),
            self.counter("doublings").to_string(),
            (self.counter("restarts") + self.counter("retries") + self.counter("net_retries")).to_string(),
            self.counter("net_size").to_string(),
            "true".into(),
        ]
    }
}

/// CSV text for a list of reports, header included.
pub fn reports_to_csv(reports: &[RunReport]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER).expect("in-memory write");
    for r in reports {
        w.write_record(r.csv_record()).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
}
