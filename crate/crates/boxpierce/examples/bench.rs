//! A small benchmark matrix written as CSV to stdout.

use boxpierce::harness::bench::{run_bench, BenchMatrix};
use boxpierce::harness::format::reports_to_csv;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let m = BenchMatrix {
        n: vec![200, 400, 800],
        d: vec![2],
        kind: vec!["uniform-random".into(), "planted-piercing".into()],
        algo: vec!["dnc".into(), "improved-mwu".into(), "multiround".into()],
        seeds: vec![0, 1],
        k: Some(10),
    };
    print!("{}", reports_to_csv(&run_bench(&m)?));
    Ok(())
}
