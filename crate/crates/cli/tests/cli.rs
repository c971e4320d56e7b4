use std::process::{Command, Output};

fn bnc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bnc"))
        .args(args)
        .env_remove("BNC_JOBS")
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = bnc(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> serde_json::Value {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    serde_json::from_str(&stdout(&all)).unwrap()
}

#[test]
fn enumerates_cncb_with_oracle() {
    let out = stdout(&["enum", "--operad", "cncb", "--max-arity", "5", "--oracle"]);
    assert!(out.contains("1 8 80 992 13760"), "{out}");
}

#[test]
fn bubble_dimensions_in_json() {
    let v = json(&["enum", "--operad", "bulle", "--max-arity", "4"]);
    assert_eq!(v["ok"], true);
    assert_eq!(v["report"]["based"], serde_json::json!([4, 8, 16]));
}

#[test]
fn suboperad_dimensions() {
    assert_eq!(stdout(&["suboperad", "--gens", "AAB,BAB", "--max-arity", "6"]).trim(), "1 2 6 22 90 394");
    assert_eq!(stdout(&["suboperad", "--gens", "BAB", "--max-arity", "5"]).trim(), "1 1 1 1 1");
}

#[test]
fn builtin_presentation_verifies() {
    let out = stdout(&["verify", "--presentation", "aab-bab", "--max-arity", "5"]);
    assert!(out.starts_with("presentation aab-bab: pass"), "{out}");
}

#[test]
fn registered_series_hold() {
    for target in ["cncb", "cncb-diagonals", "orbit-3"] {
        let out = stdout(&["series", "--target", target, "--order", "6"]);
        assert!(out.contains("holds"), "{target}: {out}");
    }
}

#[test]
fn orbit_and_symmetry_counts() {
    assert!(stdout(&["orbits", "--size", "2"]).starts_with("28 subsets, 11 orbits"));
    assert!(stdout(&["orbits", "--size", "all"]).contains("88 orbits"));
    let v = json(&["symmetries"]);
    assert_eq!(v["report"]["morphisms"].as_array().unwrap().len(), 2);
    assert_eq!(v["report"]["antimorphisms"].as_array().unwrap().len(), 2);
}

#[test]
fn relations_of_free_pair() {
    let v = json(&["relations", "--gens", "AAA,BBB", "--max-degree", "4"]);
    let news: Vec<u64> = v["report"].as_array().unwrap().iter().map(|d| d["new_classes"].as_u64().unwrap()).collect();
    assert_eq!(news, [0, 0, 0, 8]);
}

#[test]
fn renders_svg_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.svg");
    stdout(&["render", "--bnc", "n=3;B=1-3;R=", "-o", path.to_str().unwrap()]);
    let svg = std::fs::read_to_string(&path).unwrap();
    assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
}

#[test]
fn errors_exit_with_two() {
    let out = bnc(&["enum", "--operad", "cncb", "--max-arity", "40"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("limit"));
    assert_eq!(bnc(&["render", "--bnc", "garbage"]).status.code(), Some(2));
    let out = bnc(&["--json", "verify", "--presentation", "no-such-presentation"]);
    assert_eq!(out.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["ok"], false);
}

#[test]
fn output_is_deterministic_across_strategies() {
    let args = ["--json", "relations", "--gens", "AAA,BAB,BBB", "--max-degree", "3"];
    let a = bnc(&args);
    let b = Command::new(env!("CARGO_BIN_EXE_bnc")).args(args).env("BNC_JOBS", "1").output().unwrap();
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, bnc(&args).stdout);
}
