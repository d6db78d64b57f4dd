mod common;

use boxpierce::classic::*;
use boxpierce::geom::{exact_piercing, verify_piercing, BoxD, ExactCap};
use common::*;
use rand::Rng as _;

fn random_intervals(rng: &mut boxpierce::rng::Rng, n: usize) -> Vec<(i64, i64)> {
    (0..n)
        .map(|_| {
            let a = rng.gen_range(0..30);
            (a, a + rng.gen_range(0..10))
        })
        .collect()
}

#[test]
fn interval_routines_match_brute_force() {
    let mut rng = seeded(1);
    for trial in 0..400 {
        let n = 1 + trial % 12;
        let iv = random_intervals(&mut rng, n);
        let p = greedy_interval_pierce(&iv);
        assert!(iv.iter().all(|&(a, b)| p.iter().any(|&x| a <= x && x <= b)));
        assert_eq!(p.len(), brute_interval_pierce(&iv), "{iv:?}");
        let ind = greedy_interval_independent(&iv);
        let sel: Vec<BoxD> = ind.iter().map(|&i| bx(&[iv[i].0], &[iv[i].1])).collect();
        assert!(pairwise_disjoint(&sel));
        assert_eq!(ind.len(), brute_interval_independent(&iv), "{iv:?}");
    }
}

#[test]
fn dnc_outputs_are_valid() {
    let mut rng = seeded(2);
    for d in 2..=4 {
        for _ in 0..20 {
            let n = rng.gen_range(1..300);
            let inst = random_instance(&mut rng, n, d, 1000, 200);
            let sol = dnc_pierce(&inst);
            assert!(verify_piercing(&inst, &sol.points).is_empty());
            let ind = dnc_independent(&inst);
            assert!(!ind.is_empty());
            assert!(pairwise_disjoint(&ind));
        }
    }
}

#[test]
fn disjoint_grid_needs_every_square() {
    let k = 6i64;
    let mut boxes = Vec::new();
    for i in 0..k {
        for j in 0..k {
            boxes.push(bx(&[10 * i, 10 * j], &[10 * i + 5, 10 * j + 5]));
        }
    }
    let inst = boxpierce::geom::normalize_int_boxes(&boxes).unwrap();
    assert_eq!(dnc_pierce(&inst).size(), (k * k) as usize);
    let kk = (k * k) as f64;
    let ind = dnc_independent(&inst);
    assert!(pairwise_disjoint(&ind));
    assert!(ind.len() as f64 >= kk / (kk.log2().ceil() + 1.0));
    assert_eq!(dnc_independent_indices(&inst.boxes).len(), ind.len());
}

#[test]
fn common_point_gives_singletons() {
    let boxes: Vec<BoxD> = (0..10).map(|i| bx(&[-i - 1, -i - 1], &[i + 1, i + 1])).collect();
    let inst = boxpierce::geom::normalize_int_boxes(&boxes).unwrap();
    assert_eq!(dnc_pierce(&inst).size(), 1);
    assert_eq!(dnc_independent(&inst).len(), 1);
}

#[test]
fn duality_sandwich_against_exact() {
    let mut rng = seeded(3);
    for _ in 0..40 {
        let n = 30;
        let inst = random_instance(&mut rng, n, 2, 100, 40);
        let opt = exact_piercing(&inst, ExactCap::default()).unwrap().size();
        let ind = dnc_independent(&inst).len();
        let pierce = dnc_pierce(&inst).size();
        assert!(ind <= opt && opt <= pierce, "{ind} {opt} {pierce}");
        let bound = opt * ((n as f64).log2().ceil() as usize + 1);
        assert!(pierce <= bound, "{pierce} > {bound}");
    }
}
