use serde_json::Value;
use ssloc_cli::{execute, Execution, EXIT_BUDGET, EXIT_OK, EXIT_USAGE};

fn run(args: &str) -> Execution {
    execute(std::iter::once("ssloc").chain(args.split_whitespace()))
}

fn json(args: &str) -> Value {
    let out = run(args);
    assert_eq!(out.code, EXIT_OK, "{args}: {}", out.stderr);
    serde_json::from_str(&out.stdout).unwrap()
}

#[test]
fn classify_standard_spaces() {
    assert_eq!(json("space classify --p 3 --n 4")["label"], "Split");
    assert_eq!(json("space classify --p 3 --n 4 --variant non-split-even")["label"], "NonSplit");
    assert_eq!(json("space classify --p 5 --n 3")["label"], "Split");
}

#[test]
fn count_for_the_projective_line_over_f9() {
    let v = json("dl count --p 3 --m 1 --k 2");
    assert_eq!(v["total"], 10);
    let counts: Vec<u64> = v["strata"].as_array().unwrap().iter().map(|s| s["count"].as_u64().unwrap()).collect();
    assert_eq!(counts, vec![4, 6]);
}

#[test]
fn nonsplit_plane_ball_is_one_point() {
    let dot = run("complex ball --p 3 --n 2 --variant non-split-even --radius 1 --output dot");
    assert_eq!(dot.code, EXIT_OK);
    assert_eq!(dot.stdout, "graph G {\n  n0 [label=\"type=0\"];\n}\n");
    let g = json("complex ball --p 3 --n 2 --variant non-split-even --radius 1");
    assert_eq!(g["nodes"].as_array().unwrap().len(), 1);
    assert!(g["edges"].as_array().unwrap().is_empty());
}

#[test]
fn lattice_type_and_dual() {
    for t in [0, 2, 4] {
        assert_eq!(json(&format!("lattice type --p 3 --n 4 --t {t}"))["type"], t);
    }
    let d = json("lattice dual --p 3 --n 4 --t 0");
    let l = json("lattice type --p 3 --n 4 --t 0");
    assert_eq!(d["dual"], l["lattice"]);
}

#[test]
fn lattice_files_round_trip() {
    let dir = std::env::temp_dir().join(format!("ssloc-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("lattice.json");
    let dual = dir.join("dual.json");
    std::fs::write(&path, json("lattice type --p 3 --n 4 --t 2")["lattice"].to_string()).unwrap();
    std::fs::write(&dual, json("lattice dual --p 3 --n 4 --t 2")["dual"].to_string()).unwrap();
    let t = json(&format!("lattice type --p 3 --n 4 --input {}", path.display()));
    assert_eq!(t["type"], 2);
    let other = json(&format!("lattice index --p 3 --n 4 --input {} --other {}", path.display(), dual.display()));
    assert_eq!(other, json("lattice index --p 3 --n 4 --t 2"));
    assert_eq!(other["index"].as_i64().unwrap().abs(), 2);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn subs_of_the_type_four_lattice() {
    let subs = json("complex sub --p 3 --n 4 --t 4");
    let mut by_type = [0usize; 5];
    for s in subs.as_array().unwrap() {
        by_type[s["type"].as_u64().unwrap() as usize] += 1;
    }
    assert_eq!(by_type, [40, 0, 40, 0, 1]);
}

#[test]
fn weyl_dimensions_grow_with_the_stratum() {
    let v = json("weyl dim --m 3");
    let dims: Vec<u64> = v["strata"].as_array().unwrap().iter().map(|s| s["dim"].as_u64().unwrap()).collect();
    assert_eq!(dims, vec![0, 1, 2, 3]);
}

#[test]
fn closure_is_the_quotient_variety() {
    let v = json("dl closure --p 2 --m 2 --k 2 --dim 1 --index 3");
    assert_eq!(v["count"], 5);
    assert_eq!(v["bijection"], true);
}

#[test]
fn resolution_covers_every_point() {
    let v = json("dl resolve --p 2 --m 2 --k 2");
    assert_eq!(v["image"], v["points"]);
    assert_eq!(v["surjective"], true);
}

#[test]
fn output_is_deterministic() {
    for args in ["dl count --p 2 --m 2 --k 2", "complex ball --p 3 --n 3 --radius 2", "dl stratum --p 3 --m 1 --k 2"] {
        assert_eq!(run(args), run(args));
    }
}

#[test]
fn exit_codes() {
    assert_eq!(run("--help").code, EXIT_OK);
    assert_eq!(run("bogus").code, EXIT_USAGE);
    assert_eq!(run("space classify --p 3").code, EXIT_USAGE);
    assert_eq!(run("space classify --p 4 --n 2").code, EXIT_USAGE);
    assert_eq!(run("space classify --p 3 --n 3 --variant split-even").code, EXIT_USAGE);
    assert_eq!(run("lattice type --p 3 --n 2 --t 2 --variant non-split-even").code, EXIT_USAGE);
    assert_eq!(run("dl count --p 3 --m 2 --k 4 --budget 10").code, EXIT_BUDGET);
    assert_eq!(run("verify 42").code, EXIT_USAGE);
    let v = run("verify 3");
    assert_eq!(v.code, EXIT_OK);
    assert!(v.stdout.contains("PASS"));
}
