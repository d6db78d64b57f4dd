//! Vertex weights of a box arrangement: every vertex weighs
//! `2^(number of doublings of boxes containing it)`.

use boxpierce::arrangement::ArrangementDs;
use boxpierce::geom::{arrangement_vertices_of, normalize_int_boxes, BoxD};
use boxpierce::rng::rng_from_seed;
use boxpierce::weight::{Dyadic, Weight};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let boxes = vec![
        BoxD::new(vec![0, 2], vec![9, 6]),
        BoxD::new(vec![1, 0], vec![4, 10]),
        BoxD::new(vec![3, 1], vec![8, 8]),
    ];
    let inst = normalize_int_boxes(&boxes)?;
    let verts = arrangement_vertices_of(&inst.boxes, 2, 1 << 20)?;
    println!("{} arrangement vertices", verts.len());

    let mut ds = ArrangementDs::<Dyadic>::build(2, inst.boxes.clone())?;
    for i in 0..inst.len() {
        ds.insert(i)?;
    }
    println!("all active, total weight {:?}", ds.total().to_u128());
    ds.double(1)?;
    ds.double(1)?;
    println!("after doubling box 1 twice: total {:?}", ds.total().to_u128());
    println!("weight inside box 1: {:?}", ds.weight(&inst.boxes[1]).to_u128());
    let share = ds.weight(&inst.boxes[1]).ratio(&ds.total());
    println!("share of box 1: {share:.3}");

    let mut rng = rng_from_seed(3);
    let draws = ds.sample_in(&inst.boxes[0], 5, &mut rng)?;
    println!("five weighted vertices in box 0: {draws:?}");
    Ok(())
}
