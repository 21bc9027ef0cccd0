use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn dirlap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dirlap")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("bad JSON ({e}): {}", String::from_utf8_lossy(&o.stdout)))
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

const SINGLE_EDGE: &str = r#"{"vertices":[{"id":"u","m":1},{"id":"v","m":1}],"edges":[{"from":"u","to":"v","b":1}]}"#;

#[test]
fn check_ladder_passes_with_bounded_asymmetry() {
    let o = dirlap(&["check", "--gen", "ladder", "--N", "20", "--radius", "15"]);
    assert_eq!(code(&o), 0);
    let r = json(&o);
    assert!(r["report"]["asymmetry_constant"].as_f64().unwrap() <= 12.0);
    assert_eq!(r["report"]["kirchhoff_balanced"], true);
    assert_eq!(r["interior_size"], 29);
    assert_eq!(r["config"]["subcommand"], "check");
    assert_eq!(r["version"], env!("CARGO_PKG_VERSION"));
}

#[test]
fn check_single_edge_fails_and_lists_imbalance() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "edge.json", SINGLE_EDGE);
    let o = dirlap(&["check", "--graph", &path]);
    assert_eq!(code(&o), 1);
    let r = json(&o);
    assert_eq!(r["report"]["imbalanced_vertices"], serde_json::json!(["u"]));
    assert_eq!(r["report"]["kirchhoff_max_imbalance"], 1.0);
}

#[test]
fn check_tree_is_balanced() {
    let o = dirlap(&["check", "--gen", "tree", "--depth", "5"]);
    assert_eq!(code(&o), 0);
    let r = json(&o);
    // one-way edges have b' = 1/2, so each contributes 2 and a vertex with two of them reaches 4
    assert_eq!(r["report"]["asymmetry_constant"], 4.0);
}

#[test]
fn malformed_file_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "bad.json", "{\"vertices\": [{\"id\": \"u\", \"m\": 1}],\n \"edges\": [{\"from\": \"u\"");
    let o = dirlap(&["check", "--graph", &path]);
    assert_eq!(code(&o), 2);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 2"), "{err}");

    let path = write(dir.path(), "neg.json", r#"{"vertices":[{"id":"u","m":-1},{"id":"v","m":1}],"edges":[{"from":"u","to":"v","b":1}]}"#);
    let o = dirlap(&["check", "--graph", &path]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("`u`"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&dirlap(&["check"])), 2);
    assert_eq!(code(&dirlap(&["check", "--gen", "tree", "--graph", "x.json"])), 2);
    assert_eq!(code(&dirlap(&["check", "--gen", "tree", "--root", "nowhere"])), 2);
    assert_eq!(code(&dirlap(&["evolve", "--gen", "tree", "--t", "5:1:1"])), 2);
    assert_eq!(code(&dirlap(&["--help"])), 0);
}

#[test]
fn gen_round_trips_through_check() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("g.json");
    let o = dirlap(&["gen", "random", "--n", "10", "--seed", "3", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let text = std::fs::read_to_string(&out).unwrap();
    let g: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(g["vertices"].as_array().unwrap().len(), 10);
    let o = dirlap(&["check", "--graph", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
}

#[test]
fn spectrum_ladder_sector_holds() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("w.csv");
    let o = dirlap(&["spectrum", "--gen", "ladder", "--N", "25", "--radius", "10", "--csv", csv.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let r = json(&o);
    assert_eq!(r["report"]["sector"]["holds"], true);
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("angle,re,im"));
    assert_eq!(lines.count(), 360);
}

#[test]
fn spectrum_symmetric_graph_reports_zero_angle() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(
        dir.path(),
        "sym.json",
        r#"{"vertices":[{"id":"a","m":1},{"id":"b","m":2},{"id":"c","m":1}],
            "edges":[{"from":"a","to":"b","b":1},{"from":"b","to":"a","b":1},
                     {"from":"b","to":"c","b":2},{"from":"c","to":"b","b":2}]}"#,
    );
    let o = dirlap(&["spectrum", "--graph", &path, "--radius", "2"]);
    assert_eq!(code(&o), 0);
    let r = json(&o);
    assert_eq!(r["report"]["asymmetry_constant"], 0.0);
    assert_eq!(r["report"]["sector"]["sector"]["semi_angle"], 0.0);
    assert_eq!(r["report"]["fitted_semi_angle"], 0.0);
}

#[test]
fn spectrum_unit_ladder_min_real_above_one_sixth() {
    let o = dirlap(&["spectrum", "--gen", "ladder", "--measure", "unit", "--N", "25", "--radius", "20"]);
    let r = json(&o);
    assert!(r["report"]["min_real"].as_f64().unwrap() >= 1.0 / 6.0);
}

#[test]
fn cheeger_unit_ladder() {
    let o = dirlap(&["cheeger", "--gen", "ladder", "--measure", "unit", "--N", "20", "--radius", "10"]);
    assert_eq!(code(&o), 0);
    let r = json(&o);
    assert_eq!(r["report"]["h"], 22.0 / 21.0);
    assert_eq!(r["report"]["max_degree"], 3);
    assert_eq!(r["report"]["exact"], false);
    assert_eq!(r["report"]["verdict"], true);
    assert!(r["report"]["witness"].as_array().unwrap().len() == 21);

    let o = dirlap(&["cheeger", "--gen", "ladder", "--N", "20"]);
    assert_eq!(code(&o), 2, "sqrt measure has no Cheeger bound");
}

#[test]
fn evolve_unit_ladder_decays() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("trace.csv");
    let o = dirlap(&[
        "evolve", "--gen", "ladder", "--measure", "unit", "--N", "25", "--radius", "20", "--t", "0:5:0.1", "--lambda0",
        "0.1667", "--csv", csv.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("t,opnorm,bound,state0,state1\n"));
    assert_eq!(text.lines().count(), 52);
    assert_eq!(json(&o)["report"]["trace"]["flagged"], serde_json::json!([]));
}

#[test]
fn evolve_flags_too_fast_decay() {
    let o = dirlap(&["evolve", "--gen", "ladder", "--measure", "unit", "--N", "20", "--radius", "10", "--lambda0", "10"]);
    assert_eq!(code(&o), 1);
    assert!(!json(&o)["report"]["flagged_times"].as_array().unwrap().is_empty());
}

#[test]
fn evolve_single_time_zero_passes() {
    let o = dirlap(&["evolve", "--gen", "tree", "--t", "0", "--lambda0", "10"]);
    assert_eq!(code(&o), 0);
}

#[test]
fn certify_verdicts() {
    let o = dirlap(&["certify", "--gen", "tree", "--depth", "4"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["report"]["verdict"], true);

    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "edge.json", SINGLE_EDGE);
    let o = dirlap(&["certify", "--graph", &path, "--radius", "1"]);
    assert_eq!(code(&o), 1);
    assert_eq!(json(&o)["report"]["kirchhoff_witness"], "u");
}

#[test]
fn reports_are_deterministic() {
    for args in [
        &["certify", "--gen", "random", "--n", "14", "--seed", "9"][..],
        &["evolve", "--gen", "random", "--n", "14", "--seed", "9", "--t", "0:2:0.5"][..],
        &["spectrum", "--gen", "ladder", "--N", "12", "--angles", "90"][..],
    ] {
        let a = dirlap(args);
        let b = dirlap(args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
    let one = Command::new(env!("CARGO_BIN_EXE_dirlap"))
        .args(["certify", "--gen", "random", "--n", "14", "--seed", "9"])
        .env("DIRLAP_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(one.stdout, dirlap(&["certify", "--gen", "random", "--n", "14", "--seed", "9"]).stdout);
}

#[test]
fn matrix_dumps_are_written() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("a.csv");
    let coo = dir.path().join("a.coo");
    let o = dirlap(&[
        "check", "--gen", "tree", "--depth", "2", "--radius", "1", "--dump-csv", csv.to_str().unwrap(), "--dump-coo",
        coo.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let rows = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(rows.lines().count(), 4);
    assert!(std::fs::read_to_string(&coo).unwrap().lines().count() >= 4);
}

#[test]
fn bad_thread_count_is_an_input_error() {
    let o = Command::new(env!("CARGO_BIN_EXE_dirlap"))
        .args(["check", "--gen", "tree"])
        .env("DIRLAP_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(code(&o), 2);
}
