use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

fn piso() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_piso"));
    c.env_remove("PISO_TOL");
    c
}

fn run(args: &[&str]) -> Output {
    piso().args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn matrix(rows: usize, cols: usize, real: &[f64]) -> Value {
    let entries: Vec<[f64; 2]> = real.iter().map(|&x| [x, 0.0]).collect();
    json!({"rows": rows, "cols": cols, "entries": entries})
}

fn write(dir: &TempDir, name: &str, value: &Value) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, value.to_string()).unwrap();
    path
}

fn read(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn classify_identity_and_half_diagonal() {
    let dir = TempDir::new().unwrap();
    let id = write(&dir, "id.json", &matrix(2, 2, &[1.0, 0.0, 0.0, 1.0]));
    let out = run(&["classify", s(&id)]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).lines().next(), Some("unitary"));

    let half = write(&dir, "half.json", &matrix(2, 2, &[1.0, 0.0, 0.0, 0.5]));
    let out = run(&["classify", s(&half)]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        stdout(&out).lines().next(),
        Some("contraction; not a partial isometry")
    );

    let out = run(&["classify", "--json", s(&half)]);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["class"]["is_contraction"], true);
    assert_eq!(v["class"]["is_partial_isometry"], false);
}

#[test]
fn classify_partial_function() {
    let dir = TempDir::new().unwrap();
    let f = write(
        &dir,
        "f.json",
        &json!({"source": ["b1", "b2"], "target": ["a1", "a2"], "map": {"b1": "a2"}}),
    );
    let out = run(&["classify", s(&f)]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).lines().next(), Some("partial isometry"));
}

#[test]
fn unreadable_inputs_exit_2() {
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"rows\": 2, \"cols\": [").unwrap();
    assert_eq!(code(&run(&["classify", s(&bad)])), 2);
    assert_eq!(
        code(&run(&["classify", s(&dir.path().join("missing.json"))])),
        2
    );
    let other = write(&dir, "other.json", &json!({"hello": 1}));
    assert_eq!(code(&run(&["classify", s(&other)])), 2);
    let short = write(
        &dir,
        "short.json",
        &json!({"rows": 2, "cols": 2, "entries": [[1, 0]]}),
    );
    assert_eq!(code(&run(&["classify", s(&short)])), 2);
}

#[test]
fn dot_composition_of_the_non_commuting_pair_is_zero() {
    let dir = TempDir::new().unwrap();
    let v = write(&dir, "v.json", &matrix(2, 2, &[1.0, 0.0, 0.0, 0.0]));
    let w = write(&dir, "w.json", &matrix(2, 2, &[0.5; 4]));
    let out_path = dir.path().join("vw.json");
    let out = run(&[
        "compose",
        s(&v),
        s(&w),
        "--mode",
        "dot",
        "--out",
        s(&out_path),
    ]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("p_{v,w} = 0"), "{text}");
    assert!(text.contains("product already partial isometry: no"));
    let result = read(&out_path);
    assert_eq!(result["rows"], 2);
    for e in result["entries"].as_array().unwrap() {
        assert_eq!(e[0].as_f64().unwrap().abs(), 0.0);
        assert_eq!(e[1].as_f64().unwrap().abs(), 0.0);
    }
}

#[test]
fn dot_composition_of_unitaries_is_their_product() {
    let dir = TempDir::new().unwrap();
    let swap = write(&dir, "swap.json", &matrix(2, 2, &[0.0, 1.0, 1.0, 0.0]));
    let flip = write(&dir, "flip.json", &matrix(2, 2, &[1.0, 0.0, 0.0, -1.0]));
    let out_path = dir.path().join("p.json");
    let out = run(&["compose", s(&swap), s(&flip), "--out", s(&out_path)]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("product already partial isometry: yes"));
    let got: Vec<f64> = read(&out_path)["entries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e[0].as_f64().unwrap())
        .collect();
    assert_eq!(got, vec![0.0, -1.0, 1.0, 0.0]);
}

#[test]
fn compose_errors() {
    let dir = TempDir::new().unwrap();
    let col = write(&dir, "col.json", &matrix(3, 1, &[1.0, 0.0, 0.0]));
    assert_eq!(
        code(&run(&["compose", s(&col), s(&col), "--mode", "product"])),
        3
    );
    let half = write(&dir, "half.json", &matrix(2, 2, &[1.0, 0.0, 0.0, 0.5]));
    assert_eq!(
        code(&run(&["compose", s(&half), s(&half), "--mode", "dot"])),
        4
    );
    // the nearest partial isometry of diag(1, 0.5) is the identity
    assert_eq!(
        code(&run(&[
            "compose",
            s(&half),
            s(&half),
            "--mode",
            "dot",
            "--reproject"
        ])),
        0
    );
    assert_eq!(
        code(&run(&["compose", s(&half), s(&half), "--mode", "pdi"])),
        4
    );
    assert_eq!(
        code(&run(&["compose", s(&half), s(&half), "--mode", "sideways"])),
        64
    );
}

#[test]
fn pdi_mode_composes_partial_functions_and_pdis() {
    let dir = TempDir::new().unwrap();
    let f = write(
        &dir,
        "f.json",
        &json!({"source": ["b1", "b2"], "target": ["a1", "a2"], "map": {"b1": "a2"}}),
    );
    let g = write(
        &dir,
        "g.json",
        &json!({"source": ["c1", "c2"], "target": ["b1", "b2"], "map": {"c1": "b2", "c2": "b1"}}),
    );
    let fg = dir.path().join("fg.json");
    assert_eq!(
        code(&run(&[
            "compose",
            s(&f),
            s(&g),
            "--mode",
            "pdi",
            "--out",
            s(&fg)
        ])),
        0
    );
    assert_eq!(read(&fg)["map"], json!({"c2": "a2"}));

    let half = write(&dir, "half.json", &matrix(2, 2, &[1.0, 0.0, 0.0, 0.5]));
    let pdi = dir.path().join("pdi.json");
    let out = run(&["contained", s(&half), "--module", "--out", s(&pdi)]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("isometric submodule dimension: 1"));
    let composed = dir.path().join("composed.json");
    let out = run(&[
        "compose",
        s(&pdi),
        s(&pdi),
        "--mode",
        "pdi",
        "--out",
        s(&composed),
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(read(&composed)["domain"].as_array().unwrap().len(), 1);
    assert_eq!(code(&run(&["classify", s(&composed)])), 0);
}

#[test]
fn contained_partial_isometry_of_half_diagonal() {
    let dir = TempDir::new().unwrap();
    let half = write(&dir, "half.json", &matrix(2, 2, &[1.0, 0.0, 0.0, 0.5]));
    let v = dir.path().join("v.json");
    let out = run(&["contained", s(&half), "--out", s(&v)]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("isometric subspace dimension: 1"));
    let got: Vec<f64> = read(&v)["entries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e[0].as_f64().unwrap())
        .collect();
    assert_eq!(got, vec![1.0, 0.0, 0.0, 0.0]);

    let big = write(&dir, "big.json", &matrix(1, 1, &[2.0]));
    assert_eq!(code(&run(&["contained", s(&big)])), 4);
}

#[test]
fn usage_errors_exit_64() {
    assert_eq!(code(&run(&["verify", "--trials", "0"])), 64);
    assert_eq!(code(&run(&["verify", "--dim", "0"])), 64);
    assert_eq!(code(&run(&["verify", "--dim", "17"])), 64);
    assert_eq!(code(&run(&["verify", "--suite", "nope"])), 64);
    assert_eq!(code(&run(&["verify", "--tol", "1"])), 64);
    assert_eq!(code(&run(&["frobnicate"])), 64);
    assert_eq!(code(&run(&[])), 64);
    let out = piso()
        .args(["verify", "--trials", "1"])
        .env("PISO_TOL", "tiny")
        .output()
        .unwrap();
    assert_eq!(code(&out), 64);
}

#[test]
fn help_and_version_exit_0() {
    assert_eq!(code(&run(&["--help"])), 0);
    assert_eq!(code(&run(&["verify", "--help"])), 0);
    let out = run(&["--version"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).starts_with("piso "));
}

#[test]
fn verify_passes_and_is_deterministic() {
    let args = [
        "verify", "--suite", "all", "--trials", "8", "--dim", "3", "--seed", "11", "--json",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(code(&a), 0, "{}", stdout(&a));
    assert_eq!(a.stdout, b.stdout);
    let report: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(report["passed"], true);
    assert_eq!(report["suites"].as_array().unwrap().len(), 9);
    assert!(report.get("duration_secs").is_none());
    for suite in report["suites"].as_array().unwrap() {
        assert!(!suite["checks"].as_array().unwrap().is_empty());
    }
}

#[test]
fn verify_cathm_example() {
    let out = run(&[
        "verify", "--suite", "cathm", "--trials", "300", "--dim", "4", "--seed", "42", "--json",
    ]);
    assert_eq!(code(&out), 0);
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(report["suites"][0]["max_residual"].as_f64().unwrap() < 1e-7);
}

#[test]
fn environment_tolerance_is_used() {
    let out = piso()
        .args(["verify", "--suite", "pilem", "--trials", "2", "--json"])
        .env("PISO_TOL", "1e-7")
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["config"]["tol"]["eq"], 1e-7);
}

#[test]
fn failures_carry_seeds_and_replay() {
    // With zero slack every rounding error is a failure.
    let dir = TempDir::new().unwrap();
    let report = dir.path().join("report.json");
    let out = run(&[
        "verify",
        "--suite",
        "cathm",
        "--trials",
        "6",
        "--dim",
        "4",
        "--seed",
        "3",
        "--tol",
        "0",
        "--out",
        s(&report),
    ]);
    assert_eq!(code(&out), 1);
    let value = read(&report);
    let failures = value["suites"][0]["failures"].as_array().unwrap();
    assert!(!failures.is_empty());
    for f in failures {
        assert!(f["seed"].is_u64());
        assert!(!f["inputs"].as_array().unwrap().is_empty());
    }

    let out = run(&["replay", s(&report)]);
    assert_eq!(code(&out), 1);
    let text = stdout(&out);
    assert!(text.contains("reproduced"));
    assert!(!text.contains("inputs differ"), "{text}");

    let single = write(&dir, "one.json", &failures[0]);
    assert_eq!(code(&run(&["replay", s(&single)])), 1);
}
