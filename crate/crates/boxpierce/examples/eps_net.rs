//! A weak ε-net for boxes that are heavy for a point distribution.

use boxpierce::eps_net::{weak_net_for_boxes, NetConfig};
use boxpierce::geom::BoxD;
use boxpierce::range_tree::RangeTree;
use boxpierce::rng::rng_from_seed;
use rand::Rng as _;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut rng = rng_from_seed(5);
    let pts: Vec<Vec<i64>> = (0..5000).map(|_| vec![rng.gen_range(0..10_000), rng.gen_range(0..10_000)]).collect();
    let tree = RangeTree::build(2, pts.clone());
    let eps = 1.0 / 16.0;
    let mut heavy = Vec::new();
    while heavy.len() < 200 {
        let (x, y) = (rng.gen_range(0..8000), rng.gen_range(0..8000));
        let b = BoxD::new(vec![x, y], vec![x + rng.gen_range(500..4000), y + rng.gen_range(500..4000)]);
        if tree.count(&b) as f64 >= eps * pts.len() as f64 {
            heavy.push(b);
        }
    }
    let net = weak_net_for_boxes(
        |r| Ok(pts[r.gen_range(0..pts.len())].clone()),
        eps,
        &heavy,
        &NetConfig::default(),
        &mut rng,
    )?;
    let nt = RangeTree::build(2, net.points.clone());
    let missed = heavy.iter().filter(|b| !nt.any_in(b)).count();
    println!("{} net points for {} heavy boxes, {missed} missed", net.points.len(), heavy.len());
    println!("{:?}", net.stats);
    Ok(())
}
