//! Multiplicative weights with a guessed optimum, showing the per-stage log.

use boxpierce::harness::format::InstanceFile;
use boxpierce::harness::generate::{generate, GenParams, Kind};
use boxpierce::mwu::{basic_mwu_traced, BasicMwuConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g = generate(Kind::PlantedPiercing, GenParams { k: Some(8), ..GenParams::new(300, 2) }, 2)?;
    let inst = InstanceFile::from_generated(g).normalize()?;
    let trace = basic_mwu_traced(&inst, &BasicMwuConfig { seed: 2, ..Default::default() })?;
    for st in &trace.stages {
        println!(
            "k={:<3} eps={:.3} rounds={:<3} doublings={:<4} completed={}",
            st.params.k, st.params.eps, st.rounds, st.doublings, st.completed
        );
    }
    println!("{} points, stats {:?}", trace.solution.size(), trace.solution.stats);
    Ok(())
}
