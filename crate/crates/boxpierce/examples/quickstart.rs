//! Generate an instance, solve it and check the answer.
//!
//!     cargo run --release --example quickstart

use boxpierce::harness::format::InstanceFile;
use boxpierce::harness::generate::{generate, GenParams, Kind};
use boxpierce::harness::solve::{solve, verify_files, Algo, SolveOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g = generate(Kind::PlantedPiercing, GenParams { k: Some(12), ..GenParams::new(500, 2) }, 7)?;
    let file = InstanceFile::from_generated(g);
    println!("{} boxes, at most {:?} points needed", file.boxes.len(), file.meta.p_upper);

    for algo in [Algo::Dnc, Algo::BasicMwu, Algo::ImprovedMwu, Algo::Multiround(2)] {
        let solved = solve(&file, "planted", &SolveOptions::new(algo, 1))?;
        let missed = verify_files(&file, &solved.solution)?;
        println!(
            "{:<14} {:>3} points  {:>8.1} ms  unpierced {}",
            algo.to_string(),
            solved.report.size,
            solved.report.wall_ms,
            missed.len()
        );
    }
    Ok(())
}
