use std::fs;
use std::path::PathBuf;

use serde_json::Value;
use twogroups::cli::{run, EXIT_BOUND, EXIT_FAILED, EXIT_MALFORMED, EXIT_OK};

struct Dir(PathBuf);

impl Dir {
    fn new(name: &str) -> Self {
        let p = std::env::temp_dir().join(format!("twogroups-cli-{}-{name}", std::process::id()));
        fs::create_dir_all(&p).unwrap();
        Dir(p)
    }

    fn file(&self, name: &str, body: &str) -> String {
        let p = self.0.join(name);
        fs::write(&p, body).unwrap();
        p.to_string_lossy().into_owned()
    }

    fn path(&self, name: &str) -> String {
        self.0.join(name).to_string_lossy().into_owned()
    }
}

impl Drop for Dir {
    fn drop(&mut self) {
        let _ = fs::remove_dir_all(&self.0);
    }
}

fn cyclic(n: usize) -> String {
    let rows: Vec<Vec<usize>> = (0..n)
        .map(|i| (0..n).map(|j| (i + j) % n).collect())
        .collect();
    serde_json::json!({ "schema": 1, "elements": n, "mul": rows }).to_string()
}

fn coeff(m: u64) -> String {
    serde_json::json!({ "schema": 1, "moduli": [m] }).to_string()
}

fn skeletal(alpha_111: u8) -> String {
    format!(
        r#"{{"schema": 1, "pi0": {{"elements": 2, "mul": [[0,1],[1,0]]}}, "pi1": {{"moduli": [2]}}, "alpha": [[[0,0],[0,0]],[[0,{alpha_111}],[0,1]]]}}"#
    )
}

fn run_to(args: &[&str], out: &str) -> (i32, String) {
    let mut v = vec!["twogroups"];
    v.extend_from_slice(args);
    v.extend_from_slice(&["--out", out]);
    let code = run(v);
    (code, fs::read_to_string(out).unwrap_or_default())
}

#[test]
fn cohomology_of_z2_in_degree_three() {
    let d = Dir::new("coh");
    let (g, a) = (d.file("g.json", &cyclic(2)), d.file("a.json", &coeff(2)));
    let (code, out) = run_to(
        &["cohomology", "--group", &g, "--coeff", &a, "--degree", "3"],
        &d.path("o.json"),
    );
    assert_eq!(code, EXIT_OK);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["order"], 2);
}

#[test]
fn malformed_group_table_exits_two() {
    let d = Dir::new("bad");
    let g = d.file(
        "g.json",
        r#"{"schema": 1, "elements": 2, "mul": [[0,1],[0,0]]}"#,
    );
    let a = d.file("a.json", &coeff(2));
    let (code, _) = run_to(
        &["cohomology", "--group", &g, "--coeff", &a, "--degree", "2"],
        &d.path("o.json"),
    );
    assert_eq!(code, EXIT_MALFORMED);
}

#[test]
fn unknown_schema_exits_two() {
    let d = Dir::new("schema");
    let g = d.file("g.json", &cyclic(2).replace("\"schema\":1", "\"schema\":7"));
    let a = d.file("a.json", &coeff(2));
    let (code, _) = run_to(
        &["cohomology", "--group", &g, "--coeff", &a, "--degree", "2"],
        &d.path("o.json"),
    );
    assert_eq!(code, EXIT_MALFORMED);
}

#[test]
fn classify_counts_and_bound() {
    let d = Dir::new("classify");
    let (g, a) = (d.file("g.json", &cyclic(2)), d.file("a.json", &coeff(2)));
    let (code, out) = run_to(
        &["classify", "--group", &g, "--coeff", &a],
        &d.path("o.json"),
    );
    assert_eq!(code, EXIT_OK);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["classes"].as_array().unwrap().len(), 2);

    let (g8, a8) = (d.file("g8.json", &cyclic(8)), d.file("a8.json", &coeff(8)));
    let (code, _) = run_to(
        &["classify", "--group", &g8, "--coeff", &a8],
        &d.path("o8.json"),
    );
    assert_eq!(code, EXIT_BOUND);
}

#[test]
fn verify_skeletal_pass_and_fail() {
    let d = Dir::new("verify");
    let good = d.file("good.json", &skeletal(0));
    let bad = d.file("bad.json", &skeletal(1));
    assert_eq!(run_to(&["verify", &good], &d.path("o1.json")).0, EXIT_OK);
    let (code, out) = run_to(&["verify", &bad], &d.path("o2.json"));
    assert_eq!(code, EXIT_FAILED);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["pass"], false);
}

#[test]
fn verify_cochain_builds_extension() {
    let d = Dir::new("cochain");
    let (g, a) = (d.file("g.json", &cyclic(2)), d.file("a.json", &coeff(2)));
    let c = d.file(
        "c.json",
        r#"{"schema": 1, "values": [[[0,0],[0,0]],[[0,0],[0,1]]]}"#,
    );
    let (code, out) = run_to(
        &["verify", "--group", &g, "--coeff", &a, "--cochain", &c],
        &d.path("o.json"),
    );
    assert_eq!(code, EXIT_OK, "{out}");
    assert!(out.contains("extension"));
}

#[test]
fn markdown_output() {
    let d = Dir::new("md");
    let (g, a) = (d.file("g.json", &cyclic(3)), d.file("a.json", &coeff(3)));
    let (code, out) = run_to(
        &[
            "cohomology",
            "--group",
            &g,
            "--coeff",
            &a,
            "--degree",
            "2",
            "--format",
            "markdown",
        ],
        &d.path("o.md"),
    );
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with('#'), "{out}");
    assert!(out.contains("Z/3"));
}

#[test]
fn reruns_are_byte_identical() {
    let d = Dir::new("determinism");
    let (g, a) = (d.file("g.json", &cyclic(2)), d.file("a.json", &coeff(2)));
    let args = ["classify", "--group", &g, "--coeff", &a, "--seed", "5"];
    let (_, first) = run_to(&args, &d.path("o1.json"));
    let (_, second) = run_to(&args, &d.path("o2.json"));
    assert!(!first.is_empty());
    assert_eq!(first, second);
}
