use std::process::{Command, Output};
use std::str::FromStr;

use cotzeta::{PiValue, QuadElem, Rational};
use num_bigint::BigInt;
use serde_json::Value;

fn cotzeta(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cotzeta"))
        .args(args)
        .env_remove("COTZETA_PREC")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = cotzeta(&all);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_str(&stdout(&out)).unwrap()
}

fn ratio(text: &str) -> Rational {
    let (n, d) = text.split_once('/').unwrap();
    Rational::new(BigInt::from_str(n).unwrap(), BigInt::from_str(d).unwrap())
}

fn big(v: &Value) -> BigInt {
    match v {
        Value::Number(n) => BigInt::from(n.as_i64().unwrap()),
        Value::String(s) => BigInt::from_str(s).unwrap(),
        other => panic!("not an integer: {other}"),
    }
}

#[test]
fn exit_codes() {
    assert_eq!(cotzeta(&["unit", "--alpha", "quad:1,0,2,4"]).status.code(), Some(2));
    assert_eq!(cotzeta(&["value", "--m", "1"]).status.code(), Some(2));
    assert_eq!(cotzeta(&["value", "--prec", "16"]).status.code(), Some(2));
    assert_eq!(cotzeta(&["series"]).status.code(), Some(2));
    assert_eq!(cotzeta(&["value", "--matrix", "1,1,1,1"]).status.code(), Some(2));
    let ok = cotzeta(&["verify", "deform2", "--matrix", "3,4,2,3", "--grid", "6,12,24,48"]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(stdout(&ok).matches("PASS").count(), 4);
    assert_eq!(cotzeta(&["verify", "lemma1"]).status.code(), Some(0));
}

#[test]
fn deform2_rejects_oversized_exact_k() {
    let out = cotzeta(&["verify", "deform2", "--grid", "6,100000"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unit_reports() {
    let v = json(&["unit", "--alpha", "sqrt:2"]);
    let d = &v["details"];
    assert_eq!(d["matrix"], serde_json::json!([3, 4, 2, 3]));
    assert_eq!(d["eta"]["a"], "3/1");
    assert_eq!(d["eta"]["b"], "2/1");
    assert_eq!(d["disc"], 8);
    assert_eq!(d["pell"]["t"], 6);
    assert_eq!(d["pell"]["u"], 2);
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["pass"] == true));

    let g = json(&["unit", "--alpha", "golden"]);
    assert_eq!(g["details"]["matrix"], serde_json::json!([2, 1, 1, 1]));
}

#[test]
fn first_partial_sum() {
    let v = json(&["series", "--k", "1"]);
    let dec = v["decimal"].as_str().unwrap();
    assert!(dec.starts_with("0.27622641601968208089"), "{dec}");
}

#[test]
fn empty_grid_gives_header_only() {
    let out = cotzeta(&["table", "--grid", "", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "k,xi_k,abs_err\n");
}

#[test]
fn table_rows_shrink() {
    let v = json(&["table", "--grid", "10,1000"]);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    let err = |i: usize| rows[i]["abs_err"].as_str().unwrap().parse::<f64>().unwrap();
    assert!(err(1) < err(0));
}

#[test]
fn exact_value_round_trips() {
    for (alpha, m) in [("sqrt:2", "2"), ("golden", "3"), ("quad:1,1,3,7", "2")] {
        let v = json(&["value", "--alpha", alpha, "--m", m]);
        let e = &v["exact"];
        let coeff = QuadElem::new(
            ratio(e["coeff"]["a"].as_str().unwrap()),
            ratio(e["coeff"]["b"].as_str().unwrap()),
            big(&e["d"]),
        )
        .unwrap();
        let pv = PiValue::new(coeff, e["pi_power"].as_i64().unwrap() as i32);
        let prec = v["precision_bits"].as_u64().unwrap() as u32;
        let dec = v["decimal"].as_str().unwrap();
        let digits = cotzeta::HighPrecReal::decimal_digits(prec);
        assert_eq!(pv.to_real(prec).to_decimal(digits), dec, "alpha {alpha}");
    }
}

#[test]
fn output_is_deterministic() {
    for fmt in ["json", "csv", "text"] {
        let args = ["table", "--grid", "10,100,1000", "--format", fmt];
        let a = cotzeta(&args);
        let b = cotzeta(&args);
        assert_eq!(a.stdout, b.stdout, "format {fmt}");
    }
    let a = cotzeta(&["verify", "thm1", "--seed", "7", "--format", "json"]);
    let b = cotzeta(&["verify", "thm1", "--seed", "7", "--format", "json"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn out_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("value.json");
    let written = cotzeta(&["value", "--format", "json", "--out", path.to_str().unwrap()]);
    assert_eq!(written.status.code(), Some(0));
    assert!(written.stdout.is_empty());
    let direct = cotzeta(&["value", "--format", "json"]);
    assert_eq!(std::fs::read(&path).unwrap(), direct.stdout);
}

#[test]
fn precision_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_cotzeta"))
        .args(["value", "--format", "json"])
        .env("COTZETA_PREC", "200")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["precision_bits"], 200);
}

#[test]
fn bernoulli_listing() {
    let v = json(&["bernoulli", "--n", "4", "--x", "1/2"]);
    let rows = v["rows"].as_array().unwrap();
    let b: Vec<&str> = rows.iter().map(|r| r["b_n"].as_str().unwrap()).collect();
    assert_eq!(b, ["1/1", "-1/2", "1/6", "0/1", "-1/30"]);
    assert_eq!(rows[2]["b_n_x"], "-1/12");
}

#[test]
fn suites_pass_on_golden() {
    for suite in ["deform2", "deform1", "bernoulli"] {
        let out = cotzeta(&["verify", suite, "--alpha", "golden", "--m", "3"]);
        assert_eq!(out.status.code(), Some(0), "{suite}: {}", stdout(&out));
    }
}
