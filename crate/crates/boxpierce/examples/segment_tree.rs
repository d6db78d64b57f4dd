//! Doubling weights on a line: range double/halve, range weight and
//! weighted sampling, with exact weights.

use boxpierce::rng::rng_from_seed;
use boxpierce::segtree::LazySegTree;
use boxpierce::weight::{Dyadic, Weight};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut st = LazySegTree::<Dyadic>::build((0..8).collect())?;
    for c in [1, 3, 4, 6] {
        st.insert(c)?;
    }
    st.double(0, 4);
    st.double(3, 7);
    st.halve(6, 6);
    println!("total weight {:?}", st.total().to_u128());
    println!("weight of [3, 4] = {:?}", st.weight(3, 4).to_u128());
    println!("exponent at 5 (inactive) = {}", st.exponent(5)?);

    let mut rng = rng_from_seed(1);
    let mut hits = [0u32; 8];
    for _ in 0..10_000 {
        hits[st.sample(&mut rng)? as usize] += 1;
    }
    println!("sample histogram {hits:?}");
    println!("log2 total {:.3}", st.total().log2());
    Ok(())
}
