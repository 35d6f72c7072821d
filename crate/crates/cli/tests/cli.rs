use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;
use tempfile::TempDir;

const SWAP: &str = r#"{"kind":"finite","sigma":[1,0]}"#;
const TWO_CYCLES: &str = r#"{"kind":"finite","sigma":[1,0,3,2]}"#;
const ROT13: &str = r#"{"kind":"rotation","p":1,"q":3}"#;
const GOLDEN: &str = r#"{"kind":"rotation","theta":0.6180339887498949,"irrational":true}"#;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

impl Run {
    fn json(&self) -> Value {
        serde_json::from_str(&self.stdout).unwrap_or_else(|e| panic!("{e}: {}", self.stdout))
    }
}

fn run(args: &[&str]) -> Run {
    run_env(args, None)
}

fn run_env(args: &[&str], seed: Option<&str>) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_crossprod"));
    cmd.args(args).env_remove("CROSSPROD_SEED");
    if let Some(s) = seed {
        cmd.env("CROSSPROD_SEED", s);
    }
    let out = cmd.output().expect("binary runs");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8_lossy(&out.stdout).into_owned(),
        stderr: String::from_utf8_lossy(&out.stderr).into_owned(),
    }
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn check<'a>(report: &'a Value, name: &str) -> &'a Value {
    report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == name)
        .unwrap_or_else(|| panic!("no check {name}"))
}

#[test]
fn info_summaries() {
    let dir = TempDir::new().unwrap();
    for (text, expected) in [
        (SWAP, "1 orbit, period 2, not topologically free"),
        (ROT13, "Σ = Per_3(σ), not topologically free"),
        (GOLDEN, "free, topologically free"),
    ] {
        let sys = write(&dir, "sys.json", text);
        let r = run(&["info", s(&sys)]);
        assert_eq!(r.code, 0, "{}", r.stderr);
        assert_eq!(r.stdout.lines().next(), Some(expected));
        let j = run(&["info", s(&sys), "--format", "json"]).json();
        assert_eq!(j["result"]["summary"], expected);
    }
}

#[test]
fn commutant_suite_reports_basis_dimensions() {
    let dir = TempDir::new().unwrap();
    let sys = write(&dir, "swap.json", SWAP);
    let r = run(&["verify", "--sys", s(&sys), "--suite", "commutant", "--cutoff", "2", "--format", "json"]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    let report = r.json();
    assert_eq!(report["passed"], true);
    let support = check(&report, "support-condition");
    assert_eq!(support["status"], "pass");
    let dims = &support["evidence"]["monomial_dims"];
    let got: Vec<u64> = ["-2", "-1", "0", "1", "2"].iter().map(|k| dims[*k].as_u64().unwrap()).collect();
    assert_eq!(got, [2, 0, 2, 0, 2]);
    assert_eq!(check(&report, "maximal-abelian")["evidence"]["cutoff"], 2);
    assert!(report["checks"].as_array().unwrap().iter().all(|c| c["anchor"].as_str().is_some_and(|a| !a.is_empty())));
}

#[test]
fn e0_suite_on_third_rotation() {
    let dir = TempDir::new().unwrap();
    let sys = write(&dir, "rot13.json", ROT13);
    let r = run(&["verify", "--sys", s(&sys), "--suite", "e0", "--format", "json"]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    let report = r.json();
    for c in report["checks"].as_array().unwrap() {
        assert_eq!(c["status"], "pass", "{c}");
    }
}

#[test]
fn ideals_suite_on_two_cycles() {
    let dir = TempDir::new().unwrap();
    let sys = write(&dir, "two.json", TWO_CYCLES);
    let r = run(&["verify", "--sys", s(&sys), "--suite", "ideals", "--format", "json"]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    let report = r.json();
    let ej = check(&report, "support-restricted-subalgebra");
    assert_eq!(ej["status"], "pass");
    assert_eq!(ej["evidence"]["outcome"]["verdict"], "certified-empty");
    assert_eq!(check(&report, "commutant-meets-every-ideal")["evidence"]["ideals"], 20);
    assert_eq!(check(&report, "commutant-meets-every-ideal")["status"], "pass");
}

#[test]
fn skipped_checks_carry_reasons_and_do_not_fail() {
    let dir = TempDir::new().unwrap();
    let sys = write(&dir, "golden.json", GOLDEN);
    let r = run(&["verify", "--sys", s(&sys), "--suite", "ideals", "--format", "json"]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    let report = r.json();
    let skipped: Vec<&Value> =
        report["checks"].as_array().unwrap().iter().filter(|c| c["status"] == "skipped").collect();
    assert!(!skipped.is_empty());
    assert!(skipped.iter().all(|c| c["reason"].as_str().is_some_and(|r| !r.is_empty())));
    assert_eq!(check(&report, "intermediate-subalgebra-classification")["status"], "pass");
}

#[test]
fn norm_of_f_delta_on_swap() {
    let dir = TempDir::new().unwrap();
    let sys = write(&dir, "swap.json", SWAP);
    let elem = write(&dir, "a.json", r#"{"model":"discrete","n":2,"terms":[{"deg":1,"values":[[1,0],[1,0]]}]}"#);
    let j = run(&["compute", "norm", s(&elem), "--sys", s(&sys), "--format", "json"]).json();
    let est = j["result"]["norm"]["estimate"].as_f64().unwrap();
    let upper = j["result"]["upper"].as_f64().unwrap();
    assert!(est <= 1.0 + 1e-12 && upper >= 1.0 - 1e-12, "{j}");
    assert!(upper - est <= 1e-6);
}

#[test]
fn coefficient_operations() {
    let dir = TempDir::new().unwrap();
    let swap = write(&dir, "swap.json", SWAP);
    let rot = write(&dir, "rot13.json", ROT13);
    let fd = write(&dir, "fd.json", r#"{"model":"discrete","n":2,"terms":[{"deg":1,"values":[[1,0],[2,0]]}]}"#);
    let j = run(&["compute", "cesaro", s(&fd), "--n", "1", "--sys", s(&swap), "--format", "json"]).json();
    assert_eq!(j["result"]["mean"]["terms"][0]["values"], serde_json::json!([[0.5, 0.0], [1.0, 0.0]]));
    let j = run(&["compute", "fourier", s(&fd), "--j", "1", "--sys", s(&swap), "--format", "json"]).json();
    assert_eq!(j["result"]["coefficient"]["terms"][0]["deg"], 1);
    let j = run(&["compute", "fourier", s(&fd), "--j", "-1", "--sys", s(&swap), "--format", "json"]).json();
    assert_eq!(j["result"]["coefficient"]["terms"], serde_json::json!([]));

    let g = write(
        &dir,
        "g.json",
        r#"{"model":"trig","terms":[{"deg":0,"coeffs":[{"k":1,"c":[1,0]}]},{"deg":1,"coeffs":[{"k":0,"c":[2,0]}]},{"deg":3,"coeffs":[{"k":-1,"c":[0,1]}]}]}"#,
    );
    let j = run(&["compute", "e0", s(&g), "--sys", s(&rot), "--format", "json"]).json();
    let degs: Vec<i64> = j["result"]["terms"].as_array().unwrap().iter().map(|t| t["deg"].as_i64().unwrap()).collect();
    assert_eq!(degs, [0, 3]);
}

#[test]
fn ideal_operations_on_swap() {
    let dir = TempDir::new().unwrap();
    let swap = write(&dir, "swap.json", SWAP);
    let ideal = write(
        &dir,
        "i.json",
        r#"{"generators":[{"model":"discrete","n":2,"terms":[{"deg":0,"values":[[1,0],[1,0]]},{"deg":2,"values":[[-1,0],[-1,0]]}]}]}"#,
    );
    let f = write(&dir, "f.json", r#"{"model":"discrete","n":2,"terms":[{"deg":0,"values":[[1,0],[0,0]]}]}"#);
    let j = run(&["compute", "ideal-vanish", s(&ideal), "--sys", s(&swap), "--format", "json"]).json();
    assert_eq!(j["result"]["orbits"][0]["zeros"]["points"], serde_json::json!([0.0]));
    let j = run(&["compute", "ideal-contains", s(&ideal), s(&f), "--sys", s(&swap), "--format", "json"]).json();
    assert_eq!(j["result"]["contained"], false);
    let j = run(&[
        "compute", "ideal-intersect", s(&ideal), "--sys", s(&swap), "--subalgebra", r#"{"kind":"base_cx"}"#, "--format", "json",
    ])
    .json();
    assert_eq!(j["result"]["outcome"]["verdict"], "certified-empty");
    let j = run(&["compute", "mellankompl", "--sys", s(&swap), "--format", "json"]).json();
    assert_eq!(j["result"]["consistent"], true);
    assert_eq!(j["result"]["report"]["branch"], "isolated_orbit");
}

#[test]
fn json_reports_are_deterministic_and_seeded() {
    let dir = TempDir::new().unwrap();
    let sys = write(&dir, "rot13.json", ROT13);
    let args = ["verify", "--sys", s(&sys), "--suite", "ideals", "--format", "json"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.json()["seed"], 0xC0FFEE);
    assert_eq!(run_env(&args, Some("7")).json()["seed"], 7);
    let mut with_flag = args.to_vec();
    with_flag.extend(["--seed", "9"]);
    assert_eq!(run(&with_flag).json()["seed"], 9);
}

#[test]
fn bad_input_exits_with_usage_error() {
    let dir = TempDir::new().unwrap();
    let sys = write(&dir, "swap.json", SWAP);
    let r = run(&["--grid", "20", "info", s(&sys)]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("power of two"));
    let broken = write(&dir, "broken.json", "{\"kind\":\"finite\",\n\"sigma\":[1,");
    let r = run(&["info", s(&broken)]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("line 2"), "{}", r.stderr);
    let not_bijective = write(&dir, "nb.json", r#"{"kind":"finite","sigma":[1,1]}"#);
    assert_eq!(run(&["info", s(&not_bijective)]).code, 2);
    assert_eq!(run(&["compute", "norm", "--sys", s(&sys)]).code, 2);
}
