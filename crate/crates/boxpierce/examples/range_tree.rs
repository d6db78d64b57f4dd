//! Orthogonal range counting and reporting over a static point set.

use boxpierce::geom::BoxD;
use boxpierce::range_tree::RangeTree;

fn main() {
    let points: Vec<Vec<i64>> = (0..20).map(|i| vec![i, (i * 7) % 20, (i * 3) % 20]).collect();
    let tree = RangeTree::build(3, points);
    let q = BoxD::new(vec![0, 0, 0], vec![10, 10, 10]);
    println!("count in {q:?}: {}", tree.count(&q));
    println!("points: {:?}", tree.report(&q).into_iter().map(|(p, _)| p).collect::<Vec<_>>());
    println!("canonical nodes: {}", tree.canonical(&q).len());
}
