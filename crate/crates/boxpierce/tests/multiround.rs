mod common;

use boxpierce::classic::dnc_pierce;
use boxpierce::geom::{exact_piercing, normalize_instance, normalize_int_boxes, verify_piercing, BoxD, ExactCap, ProblemInstance};
use boxpierce::harness::generate::{generate, GenParams, Kind};
use boxpierce::multiround::*;
use boxpierce::rng::sub_rng;
use common::*;
use rand::seq::index::sample;
use rand::Rng as _;

fn planted(n: usize, d: usize, k: usize, seed: u64) -> ProblemInstance {
    let g = generate(Kind::PlantedPiercing, GenParams { k: Some(k), ..GenParams::new(n, d) }, seed).unwrap();
    normalize_instance(&g.boxes).unwrap()
}

#[test]
fn one_round_is_the_inner_solver() {
    let mut rng = seeded(21);
    for seed in 0..4u64 {
        let inst = random_instance(&mut rng, 80, 2, 300, 80);
        for inner in [Inner::Dnc, Inner::BasicMwu, Inner::ImprovedMwu] {
            let cfg = MultiRoundConfig { rounds: 1, seed, inner, ..Default::default() };
            let a = multi_round_pierce(&inst, &cfg).unwrap();
            let b = inner.solve(&inst, seed).unwrap();
            assert_eq!(a.points, b.points);
        }
    }
}

#[test]
fn unions_are_valid() {
    let mut rng = seeded(22);
    for trial in 0..12u64 {
        let d = 2 + (trial % 2) as usize;
        let n = rng.gen_range(5..400);
        let inst = random_instance(&mut rng, n, d, 500, 120);
        for rounds in [2, 3] {
            let cfg = MultiRoundConfig { rounds, seed: trial, sample_factor: Some(0.5), ..Default::default() };
            let sol = multi_round_pierce(&inst, &cfg).unwrap();
            assert!(verify_piercing(&inst, &sol.points).is_empty());
        }
    }
}

#[test]
fn accepted_rounds_shrink_by_delta() {
    let inst = planted(5000, 2, 20, 5);
    let cfg = MultiRoundConfig { rounds: 2, seed: 3, sample_factor: Some(0.5), ..Default::default() };
    let sol = multi_round_pierce(&inst, &cfg).unwrap();
    assert!(verify_piercing(&inst, &sol.points).is_empty());
    let k = sol.stats["k_final"] as f64;
    let delta = (k / 5000.0).sqrt();
    let residual = sol.stats["residual_1"] as f64;
    assert!(residual <= delta * 5000.0, "{residual} > {}", delta * 5000.0);

    let full = multi_round_pierce(&inst, &MultiRoundConfig { rounds: 2, seed: 3, ..Default::default() }).unwrap();
    assert!(verify_piercing(&inst, &full.points).is_empty());
}

#[test]
fn large_guess_means_one_round() {
    let boxes: Vec<BoxD> = (0..12i64).map(|i| bx(&[10 * i, 0], &[10 * i + 3, 3])).collect();
    let inst = normalize_int_boxes(&boxes).unwrap();
    let sol = multi_round_pierce(&inst, &MultiRoundConfig { rounds: 3, ..Default::default() }).unwrap();
    assert_eq!(sol.size(), 12);
    assert_eq!(sol.stats["rounds"], 1);
}

#[test]
fn small_instances_match_ratio() {
    let mut rng = seeded(23);
    for seed in 0..10u64 {
        let inst = random_instance(&mut rng, 30, 2, 100, 35);
        let p = exact_piercing(&inst, ExactCap::default()).unwrap().size();
        let sol = multi_round_pierce(&inst, &MultiRoundConfig { seed, ..Default::default() }).unwrap();
        assert!(verify_piercing(&inst, &sol.points).is_empty());
        assert!(sol.size() as f64 <= too_large(p));
    }
}

#[test]
fn shrinkage_report() {
    let mut rng = seeded(24);
    let inst = random_instance(&mut rng, 30, 2, 100, 35);
    let opt = exact_piercing(&inst, ExactCap::default()).unwrap();
    let rep = residual_shrinkage_check(&inst, &opt.points, 0.0);
    assert_eq!(rep.unpierced, 0);
    assert!(!rep.violated);

    // two far clusters; points only over the first
    let mut boxes = Vec::new();
    for i in 0..10i64 {
        boxes.push(bx(&[i, i], &[50 + i, 50 + i]));
        boxes.push(bx(&[1000 + i, 1000 + i], &[1050 + i, 1050 + i]));
    }
    let inst = normalize_int_boxes(&boxes).unwrap();
    let first = inst.boxes.iter().find(|b| b.lo[0] < inst.boxes[1].lo[0]).unwrap();
    let centre = dnc_pierce(&inst.subset(&(0..20).step_by(2).collect::<Vec<_>>())).points;
    assert!(first.contains(&centre[0]));
    let tight = residual_shrinkage_check(&inst, &centre, 0.4);
    assert_eq!(tight.unpierced, 10);
    assert!(tight.violated);
    assert!(!residual_shrinkage_check(&inst, &centre, 0.5).violated);
}

#[test]
fn sampling_bound_rarely_fails() {
    let inst = planted(2000, 2, 5, 9);
    let n = inst.len() as f64;
    let mut violations = 0;
    for t in 0..100u64 {
        let mut rng = sub_rng(77, "trial", t);
        let m = 600;
        let picked = sample(&mut rng, inst.len(), m).into_vec();
        let q = dnc_pierce(&inst.subset(&picked)).points;
        let delta = (8.0 * q.len() as f64 * n.ln() / m as f64).min(1.0);
        if residual_shrinkage_check(&inst, &q, delta).violated {
            violations += 1;
        }
    }
    assert!(violations <= 5, "{violations}");
}

#[test]
fn two_round_cases() {
    let boxes: Vec<BoxD> = (0..300i64).map(|i| bx(&[-i - 1, -2 * i - 1], &[i + 1, 3 * i + 1])).collect();
    let inst = normalize_int_boxes(&boxes).unwrap();
    let sol = two_round_2d(&inst, &TwoRoundConfig::default()).unwrap();
    assert!(verify_piercing(&inst, &sol.points).is_empty());
    assert!(sol.size() <= 2);

    let mut rng = seeded(25);
    let small = random_instance(&mut rng, 60, 2, 200, 60);
    let direct = two_round_2d(&small, &TwoRoundConfig::default()).unwrap();
    assert!(verify_piercing(&small, &direct.points).is_empty());
    assert!(!direct.stats.contains_key("sample"));

    let big = planted(4000, 2, 30, 4);
    let sol = two_round_2d(&big, &TwoRoundConfig { seed: 2, ..Default::default() }).unwrap();
    assert!(verify_piercing(&big, &sol.points).is_empty());
    assert!(sol.stats["sample"] < 4000);

    let cube = random_instance(&mut rng, 20, 3, 100, 30);
    assert!(two_round_2d(&cube, &TwoRoundConfig::default()).is_err());
}
