use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_pcsteiner"))
}

fn run(args: &[&str], dir: &Path) -> Output {
    bin().args(args).current_dir(dir).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

const K2: &str = r#"{"vertices":2,"edges":[[0,1,"2"]],"demands":[[0,1]],"penalty":{"kind":"additive","values":["1"]},"root":0}"#;

fn k2(dir: &Path) {
    std::fs::write(dir.join("k2.json"), K2).unwrap();
}

fn grid(dir: &Path, name: &str, extra: &[&str]) {
    let mut args = vec!["gen", "grid", "--rows", "3", "--cols", "3", "--seed", "7", "-o", name];
    args.extend_from_slice(extra);
    assert_eq!(code(&run(&args, dir)), 0);
}

#[test]
fn exact_on_k2_pays_the_penalty() {
    let dir = tempfile::tempdir().unwrap();
    k2(dir.path());
    let out = run(&["solve", "k2.json", "--alg", "exact", "--no-timing"], dir.path());
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["total"], "1");
}

#[test]
fn dp_with_pace_file_on_k2() {
    let dir = tempfile::tempdir().unwrap();
    k2(dir.path());
    std::fs::write(dir.path().join("k2.td"), "c one bag\ns td 1 2 2\nb 1 1 2\n").unwrap();
    let out = run(&["solve", "k2.json", "--alg", "dp", "--td", "k2.td", "--no-timing"], dir.path());
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(json(&out)["total"], "1");
}

#[test]
fn cluster_is_never_below_exact() {
    let dir = tempfile::tempdir().unwrap();
    for seed in 0..5 {
        let name = format!("g{seed}.json");
        let s = seed.to_string();
        assert_eq!(code(&run(&["gen", "grid", "--rows", "3", "--cols", "3", "--seed", &s, "-o", &name], dir.path())), 0);
        let exact = json(&run(&["solve", &name, "--no-timing"], dir.path()));
        let cluster = json(&run(&["solve", &name, "--alg", "cluster", "--no-timing"], dir.path()));
        let value = |v: &Value, key: &str| pcsteiner::rational::parse(v[key].as_str().unwrap()).unwrap();
        assert!(value(&cluster, "total_exact") >= value(&exact, "total_exact"));
    }
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    grid(d, "g.json", &[]);
    grid(d, "capped.json", &["--penalty", "capped"]);
    std::fs::write(d.join("bad.json"), "{\"vertices\": 2,").unwrap();
    assert_eq!(code(&run(&["solve", "missing.json"], d)), 2);
    assert_eq!(code(&run(&["solve", "bad.json"], d)), 2);
    assert_eq!(code(&run(&["verify", "missing-artifact.json"], d)), 2);
    assert_eq!(code(&run(&["solve", "g.json", "--epsilon", "0"], d)), 4);
    assert_eq!(code(&run(&["solve", "g.json", "--problem", "tour"], d)), 4);
    let capped = bin()
        .args(["solve", "capped.json"])
        .current_dir(d)
        .env("PCSTEINER_ORACLE_MAX_EDGES", "0")
        .env("PCSTEINER_ORACLE_MAX_TERMINALS", "0")
        .output()
        .unwrap();
    assert_eq!(code(&capped), 3);
}

#[test]
fn verify_passes_on_own_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    grid(d, "g.json", &[]);
    for alg in ["exact", "dp", "cluster", "restrict", "pipeline"] {
        let artifact = format!("{alg}.artifact.json");
        let out = run(&["solve", "g.json", "--alg", alg, "--artifact", &artifact, "--no-timing"], d);
        assert_eq!(code(&out), 0, "{alg}: {}", String::from_utf8_lossy(&out.stderr));
        let report = run(&["verify", &artifact], d);
        assert_eq!(code(&report), 0, "{alg}: {}", String::from_utf8_lossy(&report.stdout));
        assert_eq!(json(&report)["passed"], true);
    }
}

#[test]
fn inflated_dual_entry_fails_edge_feasibility() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    grid(d, "g.json", &[]);
    assert_eq!(code(&run(&["solve", "g.json", "--alg", "cluster", "--artifact", "a.json"], d)), 0);
    let mut a: Value = serde_json::from_str(&std::fs::read_to_string(d.join("a.json")).unwrap()).unwrap();
    let entry = &mut a["output"]["dual"][0]["value"];
    let inflated = pcsteiner::rational::parse(entry.as_str().unwrap()).unwrap() + pcsteiner::rational::int(1000);
    *entry = Value::String(pcsteiner::rational::format(&inflated));
    std::fs::write(d.join("a.json"), serde_json::to_string(&a).unwrap()).unwrap();
    let out = run(&["verify", "a.json"], d);
    assert_eq!(code(&out), 1);
    let report = json(&out);
    assert_eq!(report["passed"], false);
    let checks: Vec<&str> = report["violations"].as_array().unwrap().iter().map(|v| v["check"].as_str().unwrap()).collect();
    assert!(checks.contains(&"edge-feasibility"), "{checks:?}");
}

#[test]
fn verify_rechecks_the_merge_bound() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    grid(d, "g.json", &[]);
    let out = run(&["reduce", "g.json", "--epsilon", "1", "--out-dir", "bundle", "--artifact", "m.json"], d);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(d.join("bundle/manifest.json").exists());
    assert_eq!(code(&run(&["verify", "m.json"], d)), 0);
    let mut a: Value = serde_json::from_str(&std::fs::read_to_string(d.join("m.json")).unwrap()).unwrap();
    a["epsilon"] = Value::String("1000".into());
    std::fs::write(d.join("m.json"), serde_json::to_string(&a).unwrap()).unwrap();
    let report = json(&run(&["verify", "m.json"], d));
    let checks: Vec<&str> = report["violations"].as_array().unwrap().iter().map(|v| v["check"].as_str().unwrap()).collect();
    assert!(checks.contains(&"bound"), "{checks:?}");
}

#[test]
fn runs_are_byte_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let twice = |args: &[&str]| {
        let a = run(args, d);
        let b = run(args, d);
        assert_eq!(code(&a), 0, "{args:?}: {}", String::from_utf8_lossy(&a.stderr));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        a.stdout
    };
    let g = twice(&["gen", "erdos-renyi", "--n", "8", "--p", "0.4", "--seed", "3"]);
    std::fs::write(d.join("er.json"), g).unwrap();
    for alg in ["exact", "cluster", "restrict", "pipeline"] {
        twice(&["solve", "er.json", "--alg", alg, "--no-timing"]);
    }
    twice(&["trace", "er.json"]);
    assert_eq!(code(&run(&["gen", "grid", "--rows", "2", "--cols", "3", "--count", "4", "--out-dir", "c"], d)), 0);
    twice(&["bench", "c", "--alg", "exact,cluster,pipeline", "--no-timing"]);
}

fn csv_rows(out: &Output) -> Vec<Vec<String>> {
    let mut r = csv::Reader::from_reader(out.stdout.as_slice());
    r.records().map(|rec| rec.unwrap().iter().map(str::to_owned).collect()).collect()
}

#[test]
fn bench_on_fifty_grids() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let args = ["gen", "grid", "--rows", "3", "--cols", "3", "--count", "50", "--out-dir", "grids"];
    assert_eq!(code(&run(&args, d)), 0);
    let out = run(&["bench", "grids", "--alg", "cluster"], d);
    assert_eq!(code(&out), 0);
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 50);
    for row in rows {
        let ratio = pcsteiner::rational::parse(&row[3]).unwrap();
        assert!(ratio >= pcsteiner::rational::int(1), "{row:?}");
    }
}

#[test]
fn bench_exact_on_gadgets_and_dp_on_series_parallel() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::create_dir(d.join("gadgets")).unwrap();
    for g in ["k4", "k33", "prism"] {
        let file = format!("gadgets/{g}.json");
        assert_eq!(code(&run(&["gen", "vc-gadget", "--graph", g, "-o", &file], d)), 0);
    }
    let rows = csv_rows(&run(&["bench", "gadgets", "--alg", "exact"], d));
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r[3] == "1"), "{rows:?}");

    let args = ["gen", "series-parallel", "--n", "9", "--rooted", "--count", "10", "--out-dir", "sp"];
    assert_eq!(code(&run(&args, d)), 0);
    for problem in ["tree", "tour", "stroll"] {
        let rows = csv_rows(&run(&["bench", "sp", "--alg", "dp", "--problem", problem], d));
        assert_eq!(rows.len(), 10);
        assert!(rows.iter().all(|r| r[3] == "1"), "{problem}: {rows:?}");
    }
}
