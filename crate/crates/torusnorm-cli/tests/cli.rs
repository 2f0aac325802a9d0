use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name).to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_torusnorm")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json_lines(o: &Output) -> Vec<Value> {
    stdout(o).lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

#[test]
fn validate_reports() {
    let o = run(&["validate", &fixture("bouquet.tgf")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "OK genus=1 V=1 E=2 F=1");
    let bad = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/invalid.tgf");
    let o = run(&["validate", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("INVALID"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["spectrum"]).status.code(), Some(2));
    assert_eq!(run(&["compare", &fixture("bouquet.tgf"), &fixture("bouquet.tgf")]).status.code(), Some(2));
}

#[test]
fn missing_file_is_a_domain_error() {
    assert_eq!(run(&["ball", "/nonexistent.tgf"]).status.code(), Some(1));
}

#[test]
fn spectrum_of_grid() {
    let o = run(&["spectrum", "-k", "4", &fixture("c3x3.tgf")]);
    assert!(o.status.success());
    let lines = json_lines(&o);
    assert_eq!(lines.len(), 4);
    for l in &lines {
        assert_eq!(l["value"]["num"], 3);
        assert_eq!(l["value"]["den"], 1);
    }
    let o = run(&["spectrum", "-k", "12", "--multiset", &fixture("bouquet.tgf")]);
    let m: Vec<(i64, i64)> =
        json_lines(&o).iter().map(|l| (l["value"]["num"].as_i64().unwrap(), l["multiplicity"].as_i64().unwrap())).collect();
    assert_eq!(m, vec![(1, 4), (2, 8)]);
}

#[test]
fn golden_pair_comparisons() {
    let (l, r) = (fixture("iso-hexagon.tgf"), fixture("iso-octagon.tgf"));
    assert_eq!(stdout(&run(&["compare", "--unmarked", "--det", &l, &r])).trim(), "EQUAL");
    assert_eq!(stdout(&run(&["compare", "--marked", &l, &r])).trim(), "NOT-EQUIVALENT");
    let o = stdout(&run(&["compare", "--unmarked", "--trials", "20", "--seed", "5", &l, &r]));
    assert!(o.starts_with("PROBABLY-EQUAL error<=2^-20"), "{o}");
    assert_eq!(stdout(&run(&["compare", "--marked", &l, &l])).trim(), "[[1,0],[0,1]]");
}

#[test]
fn randomized_difference_reports_witness() {
    let (a, b) = (fixture("c3x3.tgf"), fixture("c3x4.tgf"));
    let o1 = stdout(&run(&["compare", "--unmarked", "--seed", "9", &a, &b]));
    let o2 = stdout(&run(&["compare", "--unmarked", "--seed", "9", "--threads", "3", &a, &b]));
    assert!(o1.starts_with("DIFFERENT witness=["), "{o1}");
    assert!(o1.contains("seed=9"));
    assert_eq!(o1, o2);
}

#[test]
fn norm_queries() {
    let g = fixture("c3x3.tgf");
    let l = json_lines(&run(&["norm", &g, "1,2"]));
    assert_eq!(l[0]["value"]["num"], 9);
    assert_eq!(l[0]["cycle"].as_array().unwrap().len(), 9);
    let l = json_lines(&run(&["norm", &g, "0,0"]));
    assert_eq!(l[0]["value"]["num"], 0);
    // a walk and its reverse cancel
    let l = json_lines(&run(&["norm", &g, "0.0 0.1"]));
    assert_eq!(l[0]["value"]["num"], 0);
    assert_eq!(run(&["norm", &g, "0.0"]).status.code(), Some(1));
}

#[test]
fn basis_and_ball_json() {
    let l = json_lines(&run(&["basis", &fixture("c3x4.tgf")]));
    assert_eq!(l[0]["a"]["weight"]["num"], 3);
    assert_eq!(l[0]["b"]["weight"]["num"], 4);
    let l = json_lines(&run(&["ball", &fixture("iso-hexagon.tgf")]));
    assert_eq!(l[0]["extremal"].as_array().unwrap().len(), 6);
    assert!(l[0]["H"].as_array().unwrap().len() >= 6);
}

#[test]
fn reconstruct_round_trip() {
    let o = run(&["reconstruct", &fixture("three-directions.json")]);
    assert!(o.status.success());
    let dir = std::env::temp_dir().join(format!("torusnorm-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("three.tgf");
    std::fs::write(&path, &o.stdout).unwrap();
    let v = stdout(&run(&["validate", path.to_str().unwrap()]));
    assert!(v.starts_with("OK genus=1 V=3 E=6 F=3"), "{v}");
    let l = json_lines(&run(&["norm", path.to_str().unwrap(), "1,1"]));
    assert_eq!(l[0]["value"], serde_json::json!({"num": 3, "den": 2}));
}

#[test]
fn oracle_agrees() {
    let l = json_lines(&run(&["oracle", "norm", &fixture("c3x4.tgf"), "1,1"]));
    assert_eq!(l[0]["value"]["num"], 7);
    let o = run(&["oracle", "spectrum", "-k", "8", &fixture("c3x3.tgf"), "--threads", "2"]);
    let v: Vec<i64> = json_lines(&o).iter().map(|l| l["value"]["num"].as_i64().unwrap()).collect();
    assert_eq!(v, vec![3, 3, 3, 3, 6, 6, 6, 6]);
}

#[test]
fn plot_is_deterministic() {
    let dir = std::env::temp_dir().join(format!("torusnorm-plot-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = dir.join("pair.svg");
    let args = ["plot", &fixture("iso-hexagon.tgf"), &fixture("iso-octagon.tgf"), "--out", out.to_str().unwrap()];
    assert!(run(&args).status.success());
    let first = std::fs::read_to_string(&out).unwrap();
    assert!(run(&args).status.success());
    assert_eq!(first, std::fs::read_to_string(&out).unwrap());
    assert_eq!(first.matches("<polygon").count(), 8);
}
