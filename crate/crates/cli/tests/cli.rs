use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;
use siegel_core::arith::Rational;
use siegel_core::eisenstein::qexp::QExpansion;
use siegel_core::lambda::{FracLambda, LambdaElement};

fn run(args: &[&str]) -> Output {
    run_env(args, &[])
}

fn run_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_siegel"));
    cmd.args(args);
    for (k, _) in std::env::vars().filter(|(k, _)| k.starts_with("SIEGEL_")) {
        cmd.env_remove(k);
    }
    cmd.envs(env.iter().copied());
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json_of(args: &[&str]) -> Value {
    let o = run(args);
    assert_eq!(o.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(&o)).unwrap()
}

fn golden(name: &str, args: &[&str]) {
    let o = run(args);
    assert_eq!(o.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    if std::env::var_os("SIEGEL_UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, stdout(&o)).unwrap();
    }
    let want = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden file {}", path.display()));
    assert_eq!(stdout(&o), want, "golden mismatch for {name}");
}

fn sigma(k: u32, m: u64) -> u64 {
    (1..=m).filter(|d| m % d == 0).map(|d| d.pow(k)).sum()
}

#[test]
fn golden_documents() {
    golden("coeff_g1_k4_tb6.json", &["coeff", "--genus", "1", "--weight", "4", "--trace-bound", "6"]);
    golden("coeff_g2_k4_a2.json", &["coeff", "--genus", "2", "--weight", "4", "--matrix", "2,1;1,2"]);
    golden("stabilize_g1_k4_p5_tb10.json", &["stabilize", "--genus", "1", "--weight", "4", "--p", "5", "--trace-bound", "10"]);
    golden("stabilize_g2_k6_p5_tb2.json", &["stabilize", "--genus", "2", "--weight", "6", "--p", "5", "--trace-bound", "2"]);
    golden("satake_g3_k6_p2.json", &["satake", "--genus", "3", "--weight", "6", "--p", "2"]);
    golden("lambda_g1_p5_a2_tb2.json", &["lambda", "--genus", "1", "--p", "5", "--a", "2", "--trace-bound", "2", "--weight", "6"]);
    golden("coeff_g1_k4_tb6.txt", &["coeff", "--genus", "1", "--weight", "4", "--trace-bound", "6", "--format", "table"]);
}

#[test]
fn coeff_genus_one_table() {
    let o = run(&["coeff", "--genus", "1", "--weight", "4", "--trace-bound", "6", "--format", "table"]);
    assert_eq!(o.status.code(), Some(0));
    let values: Vec<String> = stdout(&o).lines().skip(2).map(|l| l.split_whitespace().nth(1).unwrap().to_string()).collect();
    let mut want = vec!["1/240".to_string()];
    want.extend((1..=6).map(|m| sigma(3, m).to_string()));
    assert_eq!(values, want);
}

#[test]
fn coeff_genus_two_single_matrix() {
    let v = json_of(&["coeff", "--genus", "2", "--weight", "4", "--matrix", "2,1;1,2"]);
    assert_eq!(v["expansion"]["entries"][0]["value"], "-2/9");
    assert_eq!(v["constant_term"], "-1/60480");
}

#[test]
fn stabilize_reports_agreement() {
    let v = json_of(&["stabilize", "--genus", "1", "--weight", "4", "--p", "5", "--trace-bound", "10"]);
    assert_eq!(v["agreement"], true);
    assert_eq!(v["semi_ordinary"], true);
    let e = QExpansion::<Rational>::from_json(&v["expansion"]).unwrap();
    let at = |g: i64| e.get(&siegel_core::quadform::HalfIntegralMatrix::diag(&[g])).unwrap().to_string();
    assert_eq!(at(0), "-31/60");
    assert_eq!(at(5), "1");
    // ordinary genus-one stabilization: Σ_{d | m, 5 ∤ d} d³
    for m in 1..=10u64 {
        let want: u64 = (1..=m).filter(|d| m % d == 0 && d % 5 != 0).map(|d| d.pow(3)).sum();
        assert_eq!(at(m as i64), want.to_string(), "m = {m}");
    }
    for key in ["expansion", "operator", "q_star_route"] {
        assert_eq!(v[key]["entries"], v["expansion"]["entries"], "{key}");
    }
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["coeff", "--genus", "2", "--weight", "4", "--matrix", "2,1;x"]).status.code(), Some(2));
    assert_eq!(run(&["coeff", "--genus", "2", "--weight", "4", "--matrix", "2,3;3,2"]).status.code(), Some(2));
    assert_eq!(run(&["coeff", "--genus", "2", "--weight", "4"]).status.code(), Some(2));
    assert_eq!(run(&["coeff", "--genus", "1", "--weight", "4", "--trace-bound", "2", "--p", "5"]).status.code(), Some(2));
    assert_eq!(run(&["coeff", "--bogus"]).status.code(), Some(2));
    assert_eq!(run(&["stabilize", "--genus", "1", "--weight", "4", "--p", "2", "--trace-bound", "3"]).status.code(), Some(3));
    assert_eq!(run(&["coeff", "--genus", "5", "--weight", "8", "--trace-bound", "40"]).status.code(), Some(3));
    assert_eq!(run(&["lambda", "--genus", "1", "--p", "2", "--a", "0", "--trace-bound", "1"]).status.code(), Some(3));
    let o = run(&["stabilize", "--genus", "1", "--weight", "4", "--p", "2", "--trace-bound", "3"]);
    assert!(stdout(&o).is_empty());
    assert!(String::from_utf8_lossy(&o.stderr).contains("odd prime"));
}

#[test]
fn environment_and_flag_precedence() {
    let o = run_env(&["coeff", "--trace-bound", "1"], &[("SIEGEL_GENUS", "1"), ("SIEGEL_WEIGHT", "6")]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["constant_term"], "-1/504");
    let o = run_env(&["coeff", "--weight", "8", "--trace-bound", "1"], &[("SIEGEL_GENUS", "1"), ("SIEGEL_WEIGHT", "6")]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["constant_term"], "1/480");
}

#[test]
fn documents_round_trip() {
    let v = json_of(&["lambda", "--genus", "2", "--p", "5", "--a", "0", "--trace-bound", "1", "--weight", "8"]);
    let coeffs = QExpansion::<FracLambda>::from_json(&v["coefficients"]).unwrap();
    assert_eq!(coeffs.to_json(), v["coefficients"]);
    let cleared = QExpansion::<LambdaElement>::from_json(&v["cleared"]).unwrap();
    assert_eq!(cleared.to_json(), v["cleared"]);
    assert_eq!(cleared.len(), coeffs.len());
    let v = json_of(&["stabilize", "--genus", "2", "--weight", "6", "--p", "7", "--trace-bound", "2"]);
    let e = QExpansion::<Rational>::from_json(&v["expansion"]).unwrap();
    assert_eq!(e.to_json(), v["expansion"]);
}

#[test]
fn jobs_do_not_change_output() {
    let args = ["lambda", "--genus", "2", "--p", "5", "--a", "2", "--trace-bound", "2"];
    let serial = stdout(&run(&args));
    let mut par = args.to_vec();
    par.extend(["--jobs", "4"]);
    assert_eq!(stdout(&run(&par)), serial);
}

#[test]
fn verify_suites() {
    for suite in ["local", "stab", "satake"] {
        let v = json_of(&["verify", "--suite", suite]);
        assert_eq!(v["passed"], true, "{suite}");
        assert!(v["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true));
    }
    let v = json_of(&["verify", "--suite", "lambda", "--p", "5", "--a", "2"]);
    assert_eq!(v["passed"], true);
    let names: Vec<&str> = v["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
    assert!(names.iter().any(|n| n.contains("held-out")));
    assert!(names.iter().any(|n| n.contains("specialization equals stabilized")));
}
