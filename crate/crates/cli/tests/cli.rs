use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_rigidkit"));
    c.env_remove("RIGIDKIT_SEED");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}", String::from_utf8_lossy(&o.stdout));
    })
}

const K3: &str = r#"{"n":3,"edges":[[0,1],[0,2],[1,2]]}"#;
const K4: &str = r#"{"n":4,"edges":[[0,1],[0,2],[0,3],[1,2],[1,3],[2,3]]}"#;
const K5: &str = r#"{"n":5,"edges":[[0,1],[0,2],[0,3],[0,4],[1,2],[1,3],[1,4],[2,3],[2,4],[3,4]]}"#;
const K4_SEED: &str = r#"{"graph":{"n":4,"edges":[[0,1],[0,2],[0,3],[1,2],[1,3],[2,3]]},
    "placement":[[0,0],[1,0],[1,0.9],[0,1.1]],"norm":{"type":"linf"}}"#;

#[test]
fn sparsity_exit_codes() {
    let dir = TempDir::new().unwrap();
    for (body, text, code) in [
        (K4, "tight", 0),
        (K3, "sparse, not tight", 3),
        (K5, "not sparse", 4),
    ] {
        let g = write(&dir, "g.json", body);
        let o = run(&["check-sparsity", s(&g), "--oracle", "--format", "text"]);
        assert_eq!(o.status.code(), Some(code));
        let out = String::from_utf8(o.stdout).unwrap();
        assert!(out.starts_with(text), "{out}");
        assert!(out.contains("agreement: true"));
    }
}

#[test]
fn malformed_input_exits_2_without_verdict() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.json", r#"{"n":2,"edges":[[0,0]]}"#);
    let o = run(&["check-sparsity", s(&bad)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
    let o = run(&["check-sparsity", "/nonexistent/file.json"]);
    assert_eq!(o.status.code(), Some(2));
    let g = write(&dir, "g.json", K4);
    assert_eq!(
        run(&["check-sparsity", s(&g), "-k", "1", "-l", "2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["generate", "--n", "4", "--trials", "0"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn analyze_polytope_reference_k4() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "f.json", K4_SEED);
    let o = run(&["analyze", s(&f)]);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    assert_eq!(v["report"]["is_minimal"], true);
    assert_eq!(v["criteria"]["edge_disjoint_spanning_trees"], true);
    assert_eq!(v["criteria"]["trees"].as_array().unwrap().len(), 2);
    assert_eq!(
        v["colouring"]["colours"],
        serde_json::json!([1, 1, 2, 2, 2, 1])
    );
}

#[test]
fn analyze_lq_examples() {
    let dir = TempDir::new().unwrap();
    let k4 = write(
        &dir,
        "k4.json",
        r#"{"graph":{"n":4,"edges":[[0,1],[0,2],[0,3],[1,2],[1,3],[2,3]]},
            "placement":[[0.1,-0.3],[0.9,0.2],[0.4,0.8],[-0.6,0.5]],"norm":{"type":"lq","q":3}}"#,
    );
    let v = stdout_json(&run(&["analyze", s(&k4)]));
    assert_eq!(v["report"]["is_minimal"], true);

    let k3 = write(&dir, "k3.json", K3);
    let o = run(&["analyze", s(&k3), "--q", "3", "--seed", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    assert_eq!(v["report"]["is_rigid"], false);
    assert_eq!(
        v["report"]["nontrivial_flexes"].as_array().unwrap().len(),
        1
    );
}

#[test]
fn tied_edges_are_rejected_with_names() {
    let dir = TempDir::new().unwrap();
    let f = write(
        &dir,
        "tie.json",
        r#"{"graph":{"n":3,"edges":[[0,1],[0,2],[1,2]]},"placement":[[0,0],[1,1],[2,0.5]],"norm":{"type":"linf"}}"#,
    );
    let o = run(&["analyze", s(&f)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
    assert!(String::from_utf8_lossy(&o.stderr).contains("0-1"));
    let o = run(&["analyze", s(&f), "--allow-ill-positioned", "--quiet"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stderr.is_empty());
}

#[test]
fn ill_conditioned_q_warns() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "k4.json", K4);
    let o = run(&["analyze", s(&g), "--q", "60"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("polytopic"));
    let o = run(&["analyze", s(&g), "--q", "60", "--quiet"]);
    assert!(o.stderr.is_empty());
    assert_eq!(run(&["analyze", s(&g), "--q", "2"]).status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    let a = run(&["generate", "--n", "8", "--scheme", "b", "--seed", "11"]);
    let b = run(&["generate", "--n", "8", "--scheme", "b", "--seed", "11"]);
    assert_eq!(a.stdout, b.stdout);
    let c = bin()
        .args(["generate", "--n", "8", "--scheme", "b"])
        .env("RIGIDKIT_SEED", "11")
        .output()
        .unwrap();
    assert_eq!(a.stdout, c.stdout);
}

#[test]
fn generate_reduce_replay_construct() {
    let dir = TempDir::new().unwrap();
    let v = stdout_json(&run(&[
        "generate", "--n", "7", "--scheme", "b", "--seed", "5",
    ]));
    let graph = write(&dir, "g.json", &v["graph"].to_string());
    let seq = write(&dir, "seq.json", &v["sequence"].to_string());

    let replayed = stdout_json(&run(&["replay", s(&seq)]));
    assert_eq!(replayed, v["graph"]);

    let o = run(&["reduce", s(&graph)]);
    assert_eq!(o.status.code(), Some(0));
    let red = stdout_json(&o);
    let red_seq = write(&dir, "red.json", &red["sequence"].to_string());
    let again = stdout_json(&run(&["replay", s(&red_seq)]));
    assert_eq!(
        again["edges"].as_array().unwrap().len(),
        v["graph"]["edges"].as_array().unwrap().len()
    );

    let o = run(&["construct", s(&seq), "--seed", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let built = write(&dir, "built.json", &String::from_utf8(o.stdout).unwrap());
    let a = stdout_json(&run(&["analyze", s(&built)]));
    assert_eq!(a["report"]["is_minimal"], true);

    let k3 = write(&dir, "k3.json", K3);
    assert_eq!(run(&["reduce", s(&k3)]).status.code(), Some(3));
}

#[test]
fn export_formats() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "f.json", K4_SEED);
    let dot = String::from_utf8(run(&["export", s(&f), "--format", "dot"]).stdout).unwrap();
    assert!(dot.starts_with("graph F {"));
    let g = write(&dir, "g.json", K3);
    let dot = String::from_utf8(run(&["export", s(&g), "--format", "dot"]).stdout).unwrap();
    assert!(dot.contains("1 -- 2;"));
    assert_eq!(
        run(&["export", s(&g), "--format", "svg"]).status.code(),
        Some(2)
    );

    let flexible = write(
        &dir,
        "k3q.json",
        r#"{"graph":{"n":3,"edges":[[0,1],[0,2],[1,2]]},"placement":[[0,0],[1,0.2],[0.3,0.9]],"norm":{"type":"lq","q":3}}"#,
    );
    let svg =
        String::from_utf8(run(&["export", s(&flexible), "--format", "svg", "--flex", "0"]).stdout)
            .unwrap();
    assert!(svg.starts_with("<svg"));
    assert!(svg.contains("marker-end"));
    assert_eq!(
        run(&["export", s(&flexible), "--format", "svg", "--flex", "3"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn suites_pass_at_seed_one() {
    let o = run(&["suite", "oracle", "--seed", "1", "--format", "text"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stdout).contains("agreement 100%"));
    for name in ["thm38", "thm410", "invariants"] {
        let o = run(&["suite", name, "--seed", "1"]);
        assert_eq!(o.status.code(), Some(0), "{name}");
        let v = stdout_json(&o);
        assert!(v["checks"]
            .as_array()
            .unwrap()
            .iter()
            .all(|c| c["ok"] == true || c["advisory"] == true));
    }
    assert_eq!(run(&["suite", "nope"]).status.code(), Some(2));
}
