use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const G1: &str = "p dag 2 1\ns 0\nt 1\na 0 1 0.5\n";
const G2: &str = "p dag 3 2\ns 0\nt 2\na 0 1 0.5\na 1 2 0.5\n";
const G3: &str = "c diamond\np dag 4 4\ns 0\nt 3\na 0 1 0.5\na 1 3 0.5\na 0 2 0.5\na 2 3 0.5\n";

fn dagrel(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dagrel"))
        .args(args)
        .env_remove("DAGREL_SEED")
        .output()
        .expect("binary runs")
}

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, body).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "exit {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is one JSON object")
}

#[test]
fn generate_tc_writes_chain_and_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let (a, b) = (dir.path().join("a.dag"), dir.path().join("b.dag"));
    for p in [&a, &b] {
        let out = dagrel(&[
            "generate", "tc", "--n", "1000", "--alpha", "0.3", "--degree", "10", "--seed", "7",
            "-o", s(p),
        ]);
        let summary = json(&out);
        assert_eq!(summary["n"], 1000);
        assert_eq!(summary["seed"], 7);
    }
    let text = fs::read_to_string(&a).unwrap();
    assert_eq!(text, fs::read_to_string(&b).unwrap());
    assert!(text.contains("p dag 1000 "));
    for i in 0..999 {
        assert!(text.contains(&format!("\na {} {} ", i, i + 1)), "chain edge {i}");
    }
}

#[test]
fn generate_del_uses_uniform_q() {
    let dir = TempDir::new().unwrap();
    let p = dir.path().join("d.dag");
    let out = dagrel(&["generate", "del", "--n", "100", "--q", "0.25", "--seed", "1", "-o", s(&p)]);
    assert!(out.status.success());
    let text = fs::read_to_string(&p).unwrap();
    let arcs: Vec<&str> = text.lines().filter(|l| l.starts_with("a ")).collect();
    assert!(!arcs.is_empty());
    assert!(arcs.iter().all(|l| l.ends_with(" 0.25")));
    // readable again, hence acyclic
    assert!(dagrel(&["bounds", s(&p), "--mu", "simple"]).status.success());
}

#[test]
fn generate_rejects_bad_params() {
    let dir = TempDir::new().unwrap();
    let p = dir.path().join("x.dag");
    let out = dagrel(&["generate", "tc", "--n", "10", "--alpha", "0.5", "--degree", "50", "-o", s(&p)]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn estimate_diamond_is_close() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g3.dag", G3);
    let v = json(&dagrel(&[
        "estimate", s(&g), "--method", "pathmc", "--influence", "psi", "--eps", "0.1", "--delta",
        "0.01", "--scheme", "aa", "--seed", "3",
    ]));
    let est = v["estimate"].as_f64().unwrap();
    assert!((est - 0.4375).abs() <= 0.1 * 0.4375, "{est}");
    assert_eq!(v["method"], "path-psi");
    assert_eq!(v["scheme"], "sequential-aa");
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(|k| k.as_str()).collect();
    for k in ["estimate", "method", "scheme", "samples_used", "epsilon", "delta", "seed", "w_omega", "elapsed"] {
        assert!(keys.contains(&k), "{k}");
    }
}

#[test]
fn estimate_defaults_and_env_seed() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g3.dag", G3);
    let v = json(&dagrel(&["estimate", s(&g)]));
    assert_eq!(v["epsilon"].as_f64(), Some(0.1));
    assert_eq!(v["delta"].as_f64(), Some(0.001));
    assert_eq!(v["seed"], 0);
    let out = Command::new(env!("CARGO_BIN_EXE_dagrel"))
        .args(["estimate", s(&g)])
        .env("DAGREL_SEED", "99")
        .output()
        .unwrap();
    assert_eq!(json(&out)["seed"], 99);
}

#[test]
fn estimate_disconnected_is_zero() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "cut.dag", "p dag 3 1\ns 0\nt 2\na 0 1 0.9\n");
    for method in ["direct", "pathmc"] {
        let v = json(&dagrel(&["estimate", s(&g), "--method", method]));
        assert_eq!(v["estimate"].as_f64(), Some(0.0));
        assert_eq!(v["samples_used"], 0);
        assert_eq!(v["w_omega"].as_f64(), Some(0.0));
    }
}

#[test]
fn estimate_fixed_scheme() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g3.dag", G3);
    let missing = dagrel(&["estimate", s(&g), "--scheme", "fixed"]);
    assert_eq!(missing.status.code(), Some(2));
    let wrong = dagrel(&["estimate", s(&g), "--scheme", "fixed", "--method", "direct", "--bound", "karp"]);
    assert_eq!(wrong.status.code(), Some(2));

    let run = |extra: &[&str]| {
        let mut args = vec!["estimate", s(&g), "--scheme", "fixed", "--eps", "0.2", "--delta", "0.01"];
        args.extend_from_slice(extra);
        json(&dagrel(&args))
    };
    let improved = run(&["--bound", "improved"]);
    let karp = run(&["--bound", "karp"]);
    assert!(improved["samples_used"].as_u64() < karp["samples_used"].as_u64());
    let direct = run(&["--method", "direct", "--bound", "rel-lb:0.4"]);
    let e = direct["estimate"].as_f64().unwrap();
    assert!((e - 0.4375).abs() < 0.2 * 0.4375);
    assert!(run(&["--bound", "given:2.0"])["samples_used"].as_u64() > Some(0));
}

#[test]
fn estimate_output_is_byte_identical() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g3.dag", G3);
    for extra in [
        vec!["--scheme", "aa", "--seed", "5"],
        vec!["--scheme", "fixed", "--bound", "karp", "--workers", "3", "--seed", "5"],
        vec!["--method", "direct", "--seed", "5"],
    ] {
        let mut args = vec!["estimate", s(&g)];
        args.extend(extra);
        let a = dagrel(&args);
        let b = dagrel(&args);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn estimate_budget_is_a_limit() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g3.dag", G3);
    let out = dagrel(&["estimate", s(&g), "--max-samples", "10"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn input_errors_exit_three() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.dag", "p dag 2 1\ns 0\nt 1\na 0 1 1.5\n");
    let cyc = write(&dir, "cyc.dag", "p dag 2 2\ns 0\nt 1\na 0 1 0.5\na 1 0 0.5\n");
    for g in [&bad, &cyc] {
        let out = dagrel(&["estimate", s(g)]);
        assert_eq!(out.status.code(), Some(3));
        assert!(!out.stderr.is_empty());
    }
    let missing = dagrel(&["estimate", s(&dir.path().join("nope.dag"))]);
    assert_eq!(missing.status.code(), Some(3));
    assert_eq!(dagrel(&["estimate"]).status.code(), Some(2));
}

#[test]
fn bounds_reports() {
    let dir = TempDir::new().unwrap();
    let g3 = json(&dagrel(&["bounds", s(&write(&dir, "g3.dag", G3))]));
    assert_eq!(g3["w_omega"].as_f64(), Some(0.5));
    assert_eq!(g3["recommendation"], "path-mc");
    assert_eq!(g3["mu_exact"]["num"], 1);

    let g1 = json(&dagrel(&["bounds", s(&write(&dir, "g1.dag", G1))]));
    assert_eq!(g1["improved_bound"].as_f64(), Some(1.0));

    let mixed = write(&dir, "mixed.dag", "p dag 3 2\ns 0\nt 2\na 0 1 0.1\na 1 2 0.2\n");
    let v = json(&dagrel(&["bounds", s(&mixed), "--rel-lb", "0.01"]));
    assert!(v.get("improved_bound").is_none());
    assert!(v["n_direct"].as_u64().is_some());
}

#[test]
fn exact_reports() {
    let dir = TempDir::new().unwrap();
    let v = json(&dagrel(&["exact", s(&write(&dir, "g3.dag", G3))]));
    assert!((v["reliability"].as_f64().unwrap() - 0.4375).abs() < 1e-15);
    assert!((v["ratio"].as_f64().unwrap() - 8.0 / 7.0).abs() < 1e-15);
    let v = json(&dagrel(&["exact", s(&write(&dir, "g2.dag", G2))]));
    assert_eq!(v["reliability"].as_f64(), Some(0.25));
    assert_eq!(v["psi_variance"].as_f64(), Some(0.0));

    let mut big = String::from("p dag 31 30\ns 0\nt 30\n");
    for i in 0..30 {
        big.push_str(&format!("a {} {} 0.5\n", i, i + 1));
    }
    let out = dagrel(&["exact", s(&write(&dir, "big.dag", &big))]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cap"));
}

#[test]
fn compare_sweep_rows() {
    let out = dagrel(&[
        "compare",
        "--sweep",
        "tc:n=1000:alpha=0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9",
        "--seeds",
        "1,2",
        "--eps",
        "0.3",
        "--delta",
        "0.1",
        "--max-samples",
        "20000",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("instance_id,n,m,w_omega,method,estimate,samples_used,elapsed_ms,seed,status")
    );
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 9 * 2 * 2);
    assert!(rows.iter().all(|r| r.len() == 10));
    assert!(rows.iter().any(|r| r[9] == "ok"));
    assert!(rows
        .iter()
        .all(|r| ["ok", "budget_exceeded"].contains(&r[9])));
    assert_eq!(rows.iter().filter(|r| r[4] == "direct").count(), 18);
}

#[test]
fn compare_records_bad_files() {
    let dir = TempDir::new().unwrap();
    let good = write(&dir, "g3.dag", G3);
    let bad = write(&dir, "bad.dag", "garbage\n");
    let cut = write(&dir, "cut.dag", "p dag 3 1\ns 0\nt 2\na 0 1 0.9\n");
    let out = dagrel(&["compare", s(&good), s(&bad), s(&cut), "--seeds", "1", "--eps", "0.3"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let status: Vec<&str> = text.lines().skip(1).map(|l| l.rsplit(',').next().unwrap()).collect();
    assert_eq!(status, ["ok", "ok", "error", "error", "zero_reliability", "zero_reliability"]);
}
