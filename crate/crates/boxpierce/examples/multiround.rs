//! Round-limited solving: r rounds of sampling, and the planar two-round
//! scheme on a large instance.

use std::time::Instant;

use boxpierce::harness::format::InstanceFile;
use boxpierce::harness::generate::{generate, GenParams, Kind};
use boxpierce::multiround::{multi_round_pierce, two_round_2d, MultiRoundConfig, TwoRoundConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g = generate(Kind::PlantedPiercing, GenParams { k: Some(20), ..GenParams::new(5000, 2) }, 1)?;
    let inst = InstanceFile::from_generated(g).normalize()?;
    for rounds in 1..=4 {
        let t = Instant::now();
        let sol = multi_round_pierce(&inst, &MultiRoundConfig { rounds, seed: 1, ..Default::default() })?;
        println!("r={rounds}: {} points in {:?}, stats {:?}", sol.size(), t.elapsed(), sol.stats);
    }

    let g = generate(Kind::PlantedPiercing, GenParams { k: Some(50), ..GenParams::new(50_000, 2) }, 1)?;
    let inst = InstanceFile::from_generated(g).normalize()?;
    let t = Instant::now();
    let sol = two_round_2d(&inst, &TwoRoundConfig { seed: 1, ..Default::default() })?;
    println!("two rounds on 50000 boxes: {} points in {:?}, stats {:?}", sol.size(), t.elapsed(), sol.stats);
    Ok(())
}
