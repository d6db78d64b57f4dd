//! The sampling-based solver on a three-dimensional instance.

use boxpierce::geom::verify_piercing;
use boxpierce::harness::format::InstanceFile;
use boxpierce::harness::generate::{generate, GenParams, Kind};
use boxpierce::mwu::{improved_mwu, ImprovedMwuConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g = generate(Kind::UniformRandom, GenParams::new(400, 3), 6)?;
    let inst = InstanceFile::from_generated(g).normalize()?;
    let sol = improved_mwu(&inst, &ImprovedMwuConfig { seed: 6, ..Default::default() })?;
    println!("{} points, valid {}", sol.size(), verify_piercing(&inst, &sol.points).is_empty());
    for (k, v) in &sol.stats {
        println!("  {k} = {v}");
    }
    Ok(())
}
