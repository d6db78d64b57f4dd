mod common;

use boxpierce::arrangement::{batch_sample, cell_is_clean, sweep_structure, ArrangementDs};
use boxpierce::geom::{arrangement_vertices_of, BoxD, PointD};
use boxpierce::weight::Dyadic;
use common::*;
use std::collections::BTreeMap;

#[test]
fn fig_cell_weights() {
    let boxes = vec![
        bx(&[-10, 20], &[90, 60]),
        bx(&[10, 0], &[40, 100]),
        bx(&[12, 2], &[44, 102]),
        bx(&[14, 4], &[48, 104]),
        bx(&[-8, 30], &[92, 70]),
    ];
    let mut ds = ArrangementDs::<Dyadic>::build(2, boxes).unwrap();
    for i in 0..5 {
        ds.insert(i).unwrap();
        ds.double(i).unwrap();
    }
    assert_eq!(ds.weight(&bx(&[14, 20], &[14, 20])).to_u128(), Some(16));
    assert_eq!(ds.weight(&bx(&[14, 30], &[14, 30])).to_u128(), Some(32));
}

fn random_script(seed: u64, d: usize, n: usize, ops: usize) {
    if let Err(e) = arrangement_script(seed, d, n, ops) {
        panic!("{e}");
    }
}

fn exact(w: &Dyadic) -> u128 {
    w.to_u128().expect("integral weight")
}

#[test]
fn differential_scripts_2d() {
    for seed in 0..40 {
        random_script(seed, 2, 12, 120);
    }
}

#[test]
fn differential_scripts_3d() {
    for seed in 0..25 {
        random_script(100 + seed, 3, 10, 100);
    }
}

#[test]
fn differential_scripts_1d_and_4d() {
    for seed in 0..20 {
        random_script(200 + seed, 1, 15, 100);
    }
    for seed in 0..6 {
        random_script(300 + seed, 4, 6, 60);
    }
}

#[test]
fn all_active_total_matches_vertex_count() {
    let mut rng = seeded(77);
    for d in 2..=3 {
        let inst = random_instance(&mut rng, 20, d, 40, 20);
        let mut ds = ArrangementDs::<Dyadic>::build(d, inst.boxes.clone()).unwrap();
        for i in 0..inst.len() {
            ds.insert(i).unwrap();
        }
        let v = arrangement_vertices_of(&inst.boxes, d, 1 << 24).unwrap();
        assert_eq!(exact(&ds.total()), v.len() as u128);
    }
}

#[test]
fn partition_audit_random_2d() {
    let mut rng = seeded(5);
    let inst = random_instance(&mut rng, 100, 2, 400, 150);
    let ds = ArrangementDs::<Dyadic>::build(2, inst.boxes.clone()).unwrap();
    let cells = ds.cells();
    let verts = arrangement_vertices_of(&inst.boxes, 2, 1 << 24).unwrap();
    let mut covered = 0usize;
    for (cell, cand) in &cells {
        assert!(cell_is_clean(&inst.boxes, cell, cand));
        // vertices strictly inside the cell are exactly the candidate product
        let inside: Vec<&PointD> = verts
            .iter()
            .filter(|p| (0..2).all(|a| cell.lo[a] < p[a] && p[a] < cell.hi[a]))
            .collect();
        let prod = if cand.is_empty() { 0 } else { cand[0].len() * cand[1].len() };
        assert_eq!(inside.len(), prod);
        covered += inside.len();
        // odd boundaries: no vertex can sit on them
        for a in 0..2 {
            assert!(cell.lo[a] % 2 != 0 && cell.hi[a] % 2 != 0);
        }
    }
    assert_eq!(covered, verts.len());
    assert!(ds.height() <= 4 * (2 * inst.len()).ilog2() as usize + 8);
}

#[test]
fn partition_piles_3d_grid() {
    let mut boxes = Vec::new();
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                let b = [i * 10, j * 10, k * 10];
                boxes.push(bx(&[b[0], b[1], b[2]], &[b[0] + 14, b[1] + 14, b[2] + 14]));
            }
        }
    }
    let inst = boxpierce::geom::normalize_int_boxes(&boxes).unwrap();
    let ds = ArrangementDs::<Dyadic>::build(3, inst.boxes.clone()).unwrap();
    for (cell, cand) in ds.cells() {
        assert!(cell_is_clean(&inst.boxes, &cell, &cand));
    }
}

#[test]
fn batch_sample_matches_exact_distribution() {
    let mut rng = seeded(21);
    let inst = random_instance(&mut rng, 4, 2, 20, 12);
    let mut mult = vec![0u32; 4];
    mult[1] = 2;
    let mut sw = sweep_structure::<Dyadic>(&inst.boxes).unwrap();
    let draws = 40_000u64;
    let pts = batch_sample(&mut sw, &inst.boxes, &mult, draws as usize, &mut rng).unwrap();
    let mut naive = NaiveArrangement::new(2, inst.boxes.clone());
    naive.active = vec![true; 4];
    naive.mult = mult;
    let expect = naive.distribution(&BoxD::new(vec![-10, -10], vec![1000, 1000]));
    let mut obs: BTreeMap<PointD, u64> = BTreeMap::new();
    for p in pts {
        *obs.entry(p).or_insert(0) += 1;
    }
    let (stat, df) = chi_square(&obs, &expect, draws);
    assert!(stat < chi_square_critical(df, 1e-3), "chi2 {stat} df {df}");
}
