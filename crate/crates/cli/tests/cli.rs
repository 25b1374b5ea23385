use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_superpoint")).args(args).output().expect("run the binary")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json_of(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

struct TempDir(PathBuf);

impl TempDir {
    fn new(tag: &str) -> Self {
        let p = std::env::temp_dir().join(format!("superpoint-cli-{tag}-{}", std::process::id()));
        std::fs::create_dir_all(&p).unwrap();
        TempDir(p)
    }

    fn write(&self, name: &str, v: &Value) -> String {
        let p = self.0.join(name);
        std::fs::write(&p, v.to_string()).unwrap();
        p.to_str().unwrap().to_string()
    }
}

impl Drop for TempDir {
    fn drop(&mut self) {
        std::fs::remove_dir_all(&self.0).ok();
    }
}

/// `c·dx1` on the edge of the standard circle.
fn circle_form(c: i64) -> Value {
    json!({"values": {"1/s": [{"coeff": c.to_string(), "even": [0], "odd": [1]}]}})
}

#[test]
fn fundamental_class_demo() {
    let o = run(&["demo", "s1-fundamental-class"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.contains("integral: 1\n"), "{out}");
    assert!(out.contains("exactness: not exact\n"), "{out}");
    assert!(out.contains("form: dx1\n"), "{out}");
}

#[test]
fn torus_demo_reports_two_classes() {
    let v = json_of(&run(&["--json", "demo", "torus-classes"]));
    assert_eq!(v["concordance_classes_rank"], 2);
    assert_eq!(v["betti"], 2);
}

#[test]
fn space_commands() {
    let o = run(&["space", "validate", "--space", "torus"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("valid: true"));

    let dir = TempDir::new("space");
    let s2 = json_of(&run(&["space", "standard", "sphere2"]));
    let path = dir.write("s2.json", &s2);
    let v = json_of(&run(&["--json", "space", "validate", "--space", &path]));
    assert_eq!(v["valid"], true);
    assert_eq!(v["pi0"], 1);

    let v = json_of(&run(&["--json", "cohomology", "--space", &path, "--degree", "2"]));
    assert_eq!(v["betti_numbers"], json!([1, 0, 1]));

    let broken = dir.write("broken.json", &json!({"dims": {"0": ["v"]}, "faces": {"1/e": []}}));
    assert_eq!(code(&run(&["space", "validate", "--space", &broken])), 2);
    assert_eq!(code(&run(&["space", "validate", "--space", "no-such-space"])), 2);
}

#[test]
fn cell_limit_is_enforced() {
    let o = Command::new(env!("CARGO_BIN_EXE_superpoint"))
        .args(["space", "validate", "--space", "torus"])
        .env("SUPERPOINT_MAX_CELLS", "3")
        .output()
        .unwrap();
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("SUPERPOINT_MAX_CELLS"));
}

#[test]
fn random_forms_round_trip_through_check() {
    let dir = TempDir::new("form");
    let a = json_of(&run(&["--seed", "9", "form", "random", "--space", "simplex2", "--degree", "1"]));
    let path = dir.write("a.json", &a);
    let v = json_of(&run(&["--json", "form", "check", "--space", "simplex2", "--form", &path]));
    assert_eq!(v["compatible"], true);
    assert_eq!(v["degrees"], json!([1]));

    // incompatible: different values on the two faces glued to one vertex
    let bad = dir.write("bad.json", &json!({"values": {"1/s": [{"coeff": "1", "even": [1], "odd": []}]}}));
    let o = run(&["form", "check", "--space", "sphere1", "--form", &bad]);
    assert_eq!(code(&o), 1, "{}", stdout(&o));
}

#[test]
fn qft_membership() {
    let dir = TempDir::new("qft");
    let w = dir.write("w.json", &circle_form(1));
    let top1 = dir.write("t1.json", &json!({"geometry": "topological", "family": {"kind": "degree", "n": 1}}));
    let top0 = dir.write("t0.json", &json!({"geometry": "topological", "family": {"kind": "degree", "n": 0}}));
    let euc = dir.write("e.json", &json!({"geometry": "euclidean", "family": {"kind": "degree", "n": 3}}));
    assert_eq!(code(&run(&["qft", "check", "--space", "sphere1", "--twist", &top1, "--form", &w])), 0);
    assert_eq!(code(&run(&["qft", "check", "--space", "sphere1", "--twist", &top0, "--form0", &w])), 1);
    assert_eq!(code(&run(&["qft", "check", "--space", "sphere1", "--twist", &euc, "--form", &w])), 0);
    // single-form twists reject a second form
    assert_eq!(code(&run(&["qft", "check", "--space", "sphere1", "--twist", &top1, "--form0", &w, "--form1", &w])), 2);
}

#[test]
fn concordance_on_the_circle() {
    let dir = TempDir::new("conc");
    let w = dir.write("w.json", &circle_form(1));
    let w2 = dir.write("w2.json", &circle_form(2));
    let v = json_of(&run(&["--json", "concordance", "--space", "sphere1", "--form0", &w, "--form1", &w]));
    assert_eq!(v["concordant"], true);
    assert_eq!(v["verdicts"].as_array().unwrap().len(), 4);
    let o = run(&["--json", "concordance", "--notion", "simplicial", "--space", "sphere1", "--form0", &w, "--form1", &w2]);
    assert_eq!(code(&o), 1);
    assert_eq!(json_of(&o)["verdict"]["holds"], false);
    assert_eq!(code(&run(&["concordance", "--notion", "homotopic", "--space", "sphere1", "--form0", &w, "--form1", &w])), 2);
}

#[test]
fn coaction_verification() {
    let v = json_of(&run(&["--json", "coaction", "verify", "--ring", "3", "3"]));
    assert_eq!(v["passes"], true);
    assert_eq!(v["matches_forms"], true);

    let dir = TempDir::new("coaction");
    // a ↦ a² breaks the counit
    let bad = dir.write("bad.json", &json!({"evens": ["a"], "odds": [], "images": {"a": "a^2"}}));
    let o = run(&["--json", "coaction", "verify", "--coaction", &bad]);
    assert_eq!(code(&o), 1);
    assert_eq!(json_of(&o)["passes"], false);
}

#[test]
fn classify_commands() {
    let dir = TempDir::new("classify");
    let good = dir.write("good.json", &json!({"f0": "x*y", "f1": "3*x*y", "g0": "x", "g1": "0"}));
    let bad = dir.write("bad.json", &json!({"f0": "y^2", "f1": "0", "g0": "1", "g1": "0"}));
    let v = json_of(&run(&["--json", "classify", "verify", "--candidate", &good, "--monoid", "full"]));
    assert_eq!(v["passes"], true);
    assert_eq!(v["family"], "f-twist k=1 n=1 m=1 poly=3*y^1");
    assert_eq!(code(&run(&["classify", "verify", "--candidate", &bad, "--monoid", "full"])), 1);

    let o = run(&["--json", "classify", "search", "--degree", "1", "--field", "5", "--monoid", "full"]);
    assert_eq!(code(&o), 0);
    let v = json_of(&o);
    assert_eq!(v["all_tabulated"], true);
    assert_eq!(v["reports"][0]["field"], "F_5");

    // the untabulated k = n = 1 actions of Z/2 are reported but explained
    let v = json_of(&run(&["--json", "classify", "search", "--degree", "1", "--grid", "1", "--monoid", "z2"]));
    assert_eq!(v["all_explained"], true);
    assert_eq!(v["all_tabulated"], false);

    assert_eq!(code(&run(&["classify", "search", "--degree", "1", "--field", "17"])), 2);
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(code(&run(&[])), 2);
    assert_eq!(code(&run(&["demo", "nothing"])), 2);
    assert_eq!(code(&run(&["form", "check", "--space", "torus", "--form", "/nonexistent.json"])), 2);
}
