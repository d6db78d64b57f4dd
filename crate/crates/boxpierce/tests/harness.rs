mod common;

use boxpierce::eps_net::enumerate_kcrates;
use boxpierce::geom::{verify_piercing_raw, BoxD, RawBox};
use boxpierce::harness::format::{
    parse_script, reports_to_csv, script_to_jsonl, InstanceFile, ScriptOp, SolutionFile, CSV_HEADER,
};
use boxpierce::harness::generate::{adversarial_crate_points, generate, GenParams, InstanceMeta, Kind};
use boxpierce::harness::solve::{solve, Algo, SolveOptions};
use common::bx;

#[test]
fn instance_round_trip() {
    for kind in [Kind::UniformRandom, Kind::PlantedPiercing, Kind::SquaresUniform] {
        let g = generate(kind, GenParams::new(40, 2), 3).unwrap();
        let f = InstanceFile::from_generated(g);
        assert_eq!(InstanceFile::parse(&f.to_json()).unwrap(), f);
    }
}

#[test]
fn instance_parse_errors() {
    assert!(InstanceFile::parse("[]").is_err());
    let wrong_dim = r#"{"format":"boxpierce-instance","version":1,"dimension":3,"boxes":[{"lo":[0,0],"hi":[1,1]}]}"#;
    assert!(InstanceFile::parse(wrong_dim).is_err());
    let ok = r#"{"format":"boxpierce-instance","version":1,"dimension":2,"boxes":[{"lo":[0,0],"hi":[1,1]}]}"#;
    assert_eq!(InstanceFile::parse(ok).unwrap().meta, InstanceMeta::default());
}

#[test]
fn solution_round_trip() {
    let f = InstanceFile::new(1, vec![RawBox::new(vec![0.5], vec![2.0])], InstanceMeta::default());
    let s = solve(&f, "one", &SolveOptions::new(Algo::Dnc, 0)).unwrap().solution;
    assert_eq!(SolutionFile::parse(&s.to_json()).unwrap(), s);
    assert!(SolutionFile::parse(&f.to_json()).is_err());
}

#[test]
fn script_round_trip_and_line_numbers() {
    let ops = vec![
        ScriptOp::Insert { b: bx(&[0, 0], &[3, 4]) },
        ScriptOp::Delete { b: bx(&[0, 0], &[3, 4]) },
    ];
    let text = script_to_jsonl(&ops);
    assert_eq!(parse_script(&text).unwrap(), ops);
    let bad = format!("{text}\n{{\"op\":\"insert\",\"box\":{{\"lo\":[1],\"hi\":[2]}}}}\n");
    let e = parse_script(&bad).unwrap_err().to_string();
    assert!(e.contains("line 4"), "{e}");
}

#[test]
fn csv_has_the_fixed_header() {
    let g = generate(Kind::UniformRandom, GenParams::new(30, 2), 1).unwrap();
    let f = InstanceFile::from_generated(g);
    let r = solve(&f, "u", &SolveOptions::new(Algo::ImprovedMwu, 1)).unwrap().report;
    let text = reports_to_csv(&[r.clone(), r]);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), CSV_HEADER.join(","));
    assert_eq!(lines.count(), 2);
}

#[test]
fn solutions_are_in_input_coordinates() {
    let g = generate(Kind::PlantedPiercing, GenParams { k: Some(6), ..GenParams::new(200, 3) }, 8).unwrap();
    let boxes = g.boxes.clone();
    let f = InstanceFile::from_generated(g);
    for algo in [Algo::Dnc, Algo::ImprovedMwu] {
        let s = solve(&f, "p", &SolveOptions::new(algo, 2)).unwrap();
        assert!(verify_piercing_raw(&boxes, &s.solution.points).is_empty());
        assert_eq!(s.report.n, 200);
    }
}

#[test]
fn disjoint_grid_sizes() {
    for d in 1..=3 {
        let g = generate(Kind::DisjointGrid, GenParams { k: Some(5), ..GenParams::new(0, d) }, 0).unwrap();
        assert_eq!(g.boxes.len(), 5usize.pow(d as u32));
        assert_eq!(g.meta.p_exact, Some(g.boxes.len()));
        assert!(common::pairwise_disjoint(&InstanceFile::from_generated(g).normalize().unwrap().boxes));
    }
}

#[test]
fn nested_needs_one_point() {
    let g = generate(Kind::Nested, GenParams::new(50, 4), 1).unwrap();
    let f = InstanceFile::from_generated(g);
    let s = solve(&f, "nested", &SolveOptions::new(Algo::ImprovedMwu, 0)).unwrap();
    assert_eq!(s.report.size, 1);
}

#[test]
fn squares_are_squares() {
    let g = generate(Kind::SquaresUniform, GenParams::new(100, 2), 5).unwrap();
    for b in &g.boxes {
        assert!(((b.hi[0] - b.lo[0]) - (b.hi[1] - b.lo[1])).abs() < 1e-12);
    }
    assert!(generate(Kind::SquaresUniform, GenParams::new(10, 3), 5).is_err());
}

#[test]
fn adversarial_points_have_many_crates() {
    let n = 32;
    let pts = adversarial_crate_points(n, 4);
    assert_eq!(pts.len(), n);
    let top = pts.iter().flatten().copied().max().unwrap();
    let cell = BoxD::new(vec![0; 4], vec![top + 2; 4]);
    let crates = enumerate_kcrates(&pts, &cell, 0);
    assert!(crates.len() >= (n / 2) * (n / 2), "{} crates", crates.len());
    assert!(generate(Kind::AdversarialCrate, GenParams::new(n, 3), 0).is_err());
}

fn schema(name: &str) -> serde_json::Value {
    let p = concat!(env!("CARGO_MANIFEST_DIR"), "/../../schemas/").to_string() + name;
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

/// Every required key is present and every present key is declared.
fn conforms(schema: &serde_json::Value, v: &serde_json::Value) {
    let props = schema["properties"].as_object().unwrap();
    let obj = v.as_object().unwrap();
    for r in schema["required"].as_array().unwrap() {
        assert!(obj.contains_key(r.as_str().unwrap()), "missing {r}");
    }
    for k in obj.keys() {
        assert!(props.contains_key(k), "undeclared {k}");
    }
}

#[test]
fn outputs_match_schemas() {
    let g = generate(Kind::PlantedPiercing, GenParams::new(50, 2), 1).unwrap();
    let f = InstanceFile::from_generated(g);
    conforms(&schema("instance.schema.json"), &serde_json::to_value(&f).unwrap());
    let s = solve(&f, "p", &SolveOptions::new(Algo::ImprovedMwu, 1)).unwrap();
    conforms(&schema("solution.schema.json"), &serde_json::to_value(&s.solution).unwrap());
    conforms(&schema("report.schema.json"), &serde_json::to_value(&s.report).unwrap());
    let csv = schema("bench.csv.schema.json");
    let cols: Vec<&str> = csv["required"].as_array().unwrap().iter().map(|c| c.as_str().unwrap()).collect();
    assert_eq!(cols, CSV_HEADER);
    let op = ScriptOp::Insert { b: bx(&[0, 0], &[1, 1]) };
    conforms(&schema("script.schema.json"), &serde_json::to_value(&op).unwrap());
    let ev = boxpierce::harness::replay::replay(
        &[op],
        &boxpierce::harness::replay::ReplayOptions {
            mode: boxpierce::dynamic::Mode::Rectangles,
            seed: 0,
            verify_each: true,
        },
    )
    .unwrap();
    for e in ev {
        conforms(&schema("replay-event.schema.json"), &serde_json::to_value(&e).unwrap());
    }
    let m = boxpierce::harness::bench::BenchMatrix {
        n: vec![10],
        d: vec![2],
        kind: vec!["nested".into()],
        algo: vec!["dnc".into()],
        seeds: vec![0],
        k: None,
    };
    conforms(&schema("bench-matrix.schema.json"), &serde_json::to_value(&m).unwrap());
}
