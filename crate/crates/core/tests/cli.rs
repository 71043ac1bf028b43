use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use ehyp::numerics::NumericParams;
use serde_json::{json, Value};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ehyp"))
}

fn config(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn report(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is a JSON report")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn demo_with_eps(eps: [num_complex::Complex64; 8], dir: &Path) -> PathBuf {
    let d = NumericParams::demo();
    let c = |z: num_complex::Complex64| json!([z.re, z.im]);
    let v = json!({
        "p": c(d.p),
        "q": c(d.q),
        "eps": eps.iter().map(|e| c(*e)).collect::<Vec<_>>(),
        "nodes": 1024,
    });
    let path = dir.join("params.json");
    fs::write(&path, v.to_string()).unwrap();
    path
}

#[test]
pub fn check_outcomes_and_exit_codes() {
    let cases = [
        ("case_a.json", "transcendental", 0),
        ("case_b.json", "transcendental", 0),
        ("nu_zero.json", "inconclusive", 2),
        ("custom_b.json", "inconclusive", 2),
    ];
    for (file, outcome, exit) in cases {
        let o = run(&["check", "--params", config(file).to_str().unwrap()]);
        assert_eq!(code(&o), exit, "{file}");
        let r = report(&o);
        assert_eq!(r["mode"], "check");
        assert_eq!(r["outcome"], outcome, "{file}");
        let reasons = r["reasons"].as_array().unwrap();
        assert_eq!(reasons.is_empty(), outcome == "transcendental", "{file}: {reasons:?}");
        for key in ["inputs_digest", "tool_version", "residuals"] {
            assert!(r.get(key).is_some(), "{file}: {key}");
        }
    }
    let r = report(&run(&["check", "--params", config("nu_zero.json").to_str().unwrap()]));
    assert!(r["reasons"].as_array().unwrap().contains(&json!("nu_zero")));
    assert_eq!(r["details"]["nu_zero"], true);
}

#[test]
pub fn case_flag_overrides_the_file() {
    // the generic case-A lattice, checked as case B, is not B's lattice
    let o = run(&["check", "--case", "B", "--params", config("nu_zero.json").to_str().unwrap()]);
    assert_eq!(code(&o), 4, "{}", String::from_utf8_lossy(&o.stderr));
    let o = run(&["check", "--case", "custom", "--params", config("custom_b.json").to_str().unwrap()]);
    assert_eq!(code(&o), 2);
}

#[test]
pub fn check_report_is_byte_identical_and_written_to_out() {
    let dir = tempfile::tempdir().unwrap();
    let mut bytes = Vec::new();
    for i in 0..2 {
        let out = dir.path().join(format!("r{i}.json"));
        let o = run(&[
            "check",
            "--case",
            "A",
            "--params",
            config("case_a.json").to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(code(&o), 0);
        assert!(o.stdout.is_empty());
        bytes.push(fs::read(&out).unwrap());
    }
    assert_eq!(bytes[0], bytes[1]);
}

#[test]
pub fn validate_demo_passes_and_is_deterministic() {
    let p = config("demo.json");
    let args = ["validate", "--params", p.to_str().unwrap(), "--nodes", "1024", "--seed", "5"];
    let (a, b) = (run(&args), run(&args));
    assert_eq!(code(&a), 0, "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    let r = report(&a);
    assert_eq!(r["outcome"], "pass");
    let checks = r["residuals"].as_array().unwrap();
    assert!(checks.len() >= 10);
    assert!(checks.iter().all(|c| c["pass"] == true));
    // a different seed gives different samples
    let c = run(&["validate", "--params", p.to_str().unwrap(), "--nodes", "1024", "--seed", "6"]);
    assert_ne!(report(&c)["inputs_digest"], r["inputs_digest"]);
}

#[test]
pub fn coarse_truncation_fails_the_theta_check() {
    let o = run(&["validate", "--params", config("demo.json").to_str().unwrap(), "--trunc", "8", "--nodes", "512"]);
    assert_eq!(code(&o), 3);
    let r = report(&o);
    assert_eq!(r["outcome"], "fail");
    assert!(r["reasons"].as_array().unwrap().contains(&json!("theta_functional_q")));
}

#[test]
pub fn perturbed_balancing_fails_ellipticity_without_aborting() {
    let dir = tempfile::tempdir().unwrap();
    let mut eps = NumericParams::demo().eps;
    eps[0] *= 1.01;
    let o = run(&["validate", "--params", demo_with_eps(eps, dir.path()).to_str().unwrap()]);
    assert_eq!(code(&o), 3);
    let r = report(&o);
    let by_name = |n: &str| {
        r["residuals"]
            .as_array()
            .unwrap()
            .iter()
            .find(|c| c["name"] == n)
            .cloned()
            .unwrap()
    };
    assert_eq!(by_name("a_ellipticity")["pass"], false);
    assert!(by_name("a_ellipticity")["value"].as_f64().unwrap() > 1e-3);
    assert_eq!(by_name("balancing")["pass"], false);
    // f needs a balanced product: the check carries the error, the run goes on
    let f = by_name("hypergeo_residual");
    assert_eq!(f["pass"], false);
    assert!(f["error"].as_str().unwrap().contains("window"));
    assert_eq!(by_name("theta_functional_p")["pass"], true);
}

#[test]
pub fn eval_reports_per_point_errors() {
    let dir = tempfile::tempdir().unwrap();
    let pts = dir.path().join("points.json");
    fs::write(&pts, r#"{"points": [[1, 0], [0.95, 0.1]], "functions": ["theta", "gamma", "f"]}"#).unwrap();
    let o = run(&["eval", "--params", config("demo.json").to_str().unwrap(), "--points", pts.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let r = report(&o);
    let rows = r["values"]["points"].as_array().unwrap();
    assert_eq!(rows[0]["theta"]["value"], json!([0.0, 0.0]));
    assert!(rows[0]["gamma"]["error"].as_str().unwrap().contains("pole"));
    assert!(rows[0]["f"]["value"].is_array());
    assert!(rows[1]["gamma"].is_array());
    assert!(rows[1].get("A").is_none());
    let f_err = rows[1]["f"]["error"].as_f64().unwrap();
    assert!(f_err < 1e-10);
}

#[test]
pub fn config_errors_exit_four_and_name_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{\n  \"case\": \"A\",\n  \"lattise\": []\n}").unwrap();
    let o = run(&["check", "--params", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 4);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("lattise") && err.contains("line 3"), "{err}");

    fs::write(&bad, r#"{"points": [[1, 0]], "functions": ["zeta"]}"#).unwrap();
    let o = run(&["eval", "--params", config("demo.json").to_str().unwrap(), "--points", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 4);

    let o = run(&["validate", "--params", config("case_a.json").to_str().unwrap()]);
    assert_eq!(code(&o), 4);
    assert_eq!(code(&run(&["check"])), 4);
}
