//! Real-valued boxes are mapped to even integer coordinates that keep the
//! order of every facet, so solvers never compare floats.

use boxpierce::geom::{normalize_instance, verify_piercing, RawBox};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let raw = vec![
        RawBox::new(vec![0.1, 0.1], vec![0.4, 0.5]),
        RawBox::new(vec![0.3, 0.2], vec![0.9, 0.35]),
        RawBox::new(vec![0.4, 0.0], vec![0.45, 1.0]),
    ];
    let inst = normalize_instance(&raw)?;
    for (r, b) in raw.iter().zip(&inst.boxes) {
        println!("{:?} {:?} -> {:?} {:?}", r.lo, r.hi, b.lo, b.hi);
    }
    // one point in the common part, mapped back to the input coordinates
    let p = vec![inst.boxes[2].lo[0], inst.boxes[1].lo[1]];
    println!("pierces all: {}", verify_piercing(&inst, &[p.clone()]).is_empty());
    println!("as input coordinates: {:?}", inst.denormalize_point(&p));
    Ok(())
}
