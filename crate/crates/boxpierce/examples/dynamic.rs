//! Keeping a piercing set of rectangles and squares under insertions and
//! deletions.

use boxpierce::dynamic::{DynamicConfig, DynamicPiercer, Mode};
use boxpierce::geom::{unpierced_indices, BoxD};
use boxpierce::rng::rng_from_seed;
use rand::Rng as _;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for mode in [Mode::Rectangles, Mode::Squares] {
        let mut rng = rng_from_seed(8);
        let mut d = DynamicPiercer::new(DynamicConfig { mode, seed: 8, ..Default::default() });
        let mut live: Vec<BoxD> = Vec::new();
        for step in 0..3000 {
            if live.is_empty() || rng.gen_bool(0.6) {
                let (x, y) = (rng.gen_range(0..5000), rng.gen_range(0..5000));
                let w = rng.gen_range(50..800);
                let h = if mode == Mode::Squares { w } else { rng.gen_range(50..800) };
                let b = BoxD::new(vec![x, y], vec![x + w, y + h]);
                live.push(b.clone());
                d.insert(b)?;
            } else {
                let i = rng.gen_range(0..live.len());
                d.delete(&live.swap_remove(i))?;
            }
            if step % 500 == 499 {
                let ok = unpierced_indices(d.boxes(), d.points()).is_empty();
                println!("{mode:?} step {}: {} boxes, {} points, pierced {ok}", step + 1, d.len(), d.points().len());
            }
        }
        println!("{mode:?} {:?}", d.stats());
    }
    Ok(())
}
