//! The classical baselines: greedy on intervals, divide and conquer in
//! any dimension, the independent-set lower bound, and the exact solver.

use boxpierce::classic::{dnc_pierce, greedy_interval_pierce, independent_lower_bound};
use boxpierce::geom::{exact_piercing, ExactCap};
use boxpierce::harness::format::InstanceFile;
use boxpierce::harness::generate::{generate, GenParams, Kind};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let iv = [(0, 4), (2, 6), (5, 9), (8, 12), (11, 11)];
    println!("intervals need {:?}", greedy_interval_pierce(&iv));

    let g = generate(Kind::UniformRandom, GenParams::new(30, 2), 4)?;
    let inst = InstanceFile::from_generated(g).normalize()?;
    let lb = independent_lower_bound(&inst.boxes);
    let dnc = dnc_pierce(&inst);
    let opt = exact_piercing(&inst, ExactCap::default())?;
    println!("disjoint boxes {lb} <= optimum {} <= divide and conquer {}", opt.size(), dnc.size());
    Ok(())
}
