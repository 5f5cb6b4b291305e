//! End-to-end runs of the `dlattice` binary on temporary files.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dlattice")).current_dir(dir).args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn read(dir: &Path, name: &str) -> Value {
    serde_json::from_str(&std::fs::read_to_string(dir.join(name)).unwrap()).unwrap()
}

#[test]
fn elements_round_trip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert!(run(d, &["--dim", "3", "--seed", "1", "--out", "a.json", "gen", "element", "-k", "3"]).status.success());
    assert!(run(d, &["--dim", "3", "--seed", "2", "--out", "b.json", "gen", "element", "-k", "1"]).status.success());
    let a = read(d, "a.json");
    assert_eq!(a["ambient_hilbert_dim"], 3);
    assert_eq!(a["basis"].as_array().unwrap().len(), 3);

    assert!(run(d, &["--out", "j.json", "op", "join", "a.json", "b.json"]).status.success());
    assert_eq!(read(d, "j.json")["basis"].as_array().unwrap().len(), 4);
    let leq = run(d, &["op", "leq", "a.json", "j.json"]);
    assert_eq!(json(&leq)["leq"], true);
    let leq = run(d, &["op", "leq", "j.json", "a.json"]);
    assert_eq!(json(&leq)["leq"], false);

    assert!(run(d, &["--out", "n.json", "op", "neg", "a.json"]).status.success());
    assert!(run(d, &["--out", "m.json", "op", "meet", "a.json", "n.json"]).status.success());
    assert!(read(d, "m.json")["basis"].as_array().unwrap().is_empty());
}

#[test]
fn same_seed_same_file() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    for name in ["x.json", "y.json"] {
        assert!(run(d, &["--dim", "2", "--seed", "9", "--out", name, "gen", "density", "--rank", "1"]).status.success());
    }
    assert_eq!(std::fs::read(d.join("x.json")).unwrap(), std::fs::read(d.join("y.json")).unwrap());
}

#[test]
fn separability_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    // |Φ⁺⟩⟨Φ⁺| and the maximally mixed state on 2⊗2.
    let bell = r#"{"dim":4,"re":[[0.5,0,0,0.5],[0,0,0,0],[0,0,0,0],[0.5,0,0,0.5]],"im":[[0,0,0,0],[0,0,0,0],[0,0,0,0],[0,0,0,0]]}"#;
    let mixed = r#"{"dim":4,"re":[[0.25,0,0,0],[0,0.25,0,0],[0,0,0.25,0],[0,0,0,0.25]],"im":[[0,0,0,0],[0,0,0,0],[0,0,0,0],[0,0,0,0]]}"#;
    std::fs::write(d.join("bell.json"), bell).unwrap();
    std::fs::write(d.join("mixed.json"), mixed).unwrap();

    let out = run(d, &["--shape", "2x2", "sep", "bell.json"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["status"], "entangled");
    assert!((v["ppt_min_eigenvalue"].as_f64().unwrap() + 0.5).abs() < 1e-9);

    let out = run(d, &["--shape", "2x2", "sep", "mixed.json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["status"], "separable");
    assert!(v["decomposition"]["residual"].as_f64().unwrap() <= 1e-7);
}

#[test]
fn usage_errors_exit_64() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(run(d, &["check", "nosuch"]).status.code(), Some(64));
    assert_eq!(run(d, &["--dim", "2", "--shape", "2x2", "check", "atoms"]).status.code(), Some(64));
    assert_eq!(run(d, &["op", "meet", "missing.json", "missing.json"]).status.code(), Some(64));
    assert_eq!(run(d, &["--dim", "12", "check", "atoms"]).status.code(), Some(64));
}

#[test]
fn check_reports_and_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let out = run(d, &["--trials", "20", "--out", "r.json", "check", "negation"]);
    assert_eq!(out.status.code(), Some(0));
    let r = read(d, "r.json");
    assert_eq!(r["suite"], "negation");
    assert_eq!(r["passed"], true);
    assert!(r["wall_time_s"].as_f64().is_some());
    assert!(r["properties"].as_array().unwrap().iter().all(|p| p["passed"] == true));

    // The modular law fails on some random triples; the report says which.
    let out = run(d, &["check", "modularity"]);
    assert_eq!(out.status.code(), Some(1));
    let r = json(&out);
    let law = r["properties"].as_array().unwrap().iter().find(|p| p["name"] == "modular law").unwrap();
    assert_eq!(law["passed"], false);
    let ce = &law["counterexamples"][0];
    assert_eq!(ce["operands"].as_array().unwrap().len(), 3);
    assert!(ce["seed"].as_u64().is_some());

    let text = run(d, &["--format", "text", "--trials", "5", "check", "atoms"]);
    assert!(String::from_utf8_lossy(&text.stdout).starts_with("suite atoms"));
}

#[test]
fn bipartite_commands() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert!(run(d, &["--dim", "2", "--seed", "1", "--out", "a.json", "gen", "element", "-k", "1"]).status.success());
    assert!(run(d, &["--dim", "3", "--seed", "2", "--out", "b.json", "gen", "element", "-k", "2"]).status.success());
    assert!(run(d, &["--out", "ab.json", "psi", "a.json", "b.json"]).status.success());
    assert_eq!(read(d, "ab.json")["shape"], serde_json::json!([2, 3]));
    assert!(run(d, &["--out", "back.json", "tau", "ab.json", "--keep", "2"]).status.success());
    let same = run(d, &["op", "leq", "back.json", "b.json"]);
    assert_eq!(json(&same)["leq"], true);

    let demo = run(d, &["--shape", "2x2", "demo", "improper-mixture"]);
    assert!(demo.status.success());
    let volume = run(d, &["--shape", "2x2", "--trials", "2000", "volume"]);
    let v = json(&volume);
    let f = v["fraction"].as_f64().unwrap();
    assert!(f > 0.0 && f < 1.0 && v["exact"] == true);
}

#[test]
fn face_embedding_with_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let p = r#"{"dim":2,"re":[[1,0],[0,0]],"im":[[0,0],[0,0]],"rank":1}"#;
    std::fs::write(d.join("p.json"), p).unwrap();
    let out = run(d, &["--emit-certificate", "embed-face", "p.json"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("ambient_hilbert_dim") && text.contains("support"));
}
