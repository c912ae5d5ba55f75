use std::process::{Command, Output};

use serde_json::Value;

fn dwbc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dwbc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = dwbc(&all);
    let code = out.status.code().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    (serde_json::from_str(&text).unwrap_or_else(|e| panic!("{e}: {text}")), code)
}

fn complex(v: &Value) -> (f64, f64) {
    (v[0].as_f64().unwrap(), v[1].as_f64().unwrap())
}

#[test]
fn six_vertex_routes_agree() {
    let (r, code) = json(&["compute", "--model", "six-vertex", "--route", "all", "--n", "3", "--seed", "7", "--q", "1.3"]);
    assert_eq!(code, 0);
    let routes: Vec<&str> = r["results"].as_array().unwrap().iter().map(|x| x["route"].as_str().unwrap()).collect();
    assert_eq!(routes, ["enumerate", "transfer", "sum", "determinant"]);
    for c in r["comparisons"].as_array().unwrap() {
        assert!(c["rel_diff"].as_f64().unwrap() < 1e-9);
    }
    assert_eq!(r["verdict"], "pass");
}

#[test]
fn initial_condition_value() {
    let (r, code) = json(&[
        "compute", "--model", "sos-elliptic", "--n", "1", "--u", "0.4", "--v", "0.1", "--lambda", "0.31", "--hbar", "0.17",
        "--tau", "i",
    ]);
    assert_eq!(code, 0);
    // θ(-0.01)θ(0.17)/θ(-0.31) at τ = i, 30-digit reference.
    let expected = 0.006_134_168_062_914_654_525_620_224;
    for res in r["results"].as_array().unwrap() {
        let (re, im) = complex(&res["value"]);
        assert!((re - expected).abs() < 1e-11 * expected && im.abs() < 1e-15, "{}", res["route"]);
    }
}

#[test]
fn lambda_on_lattice_is_a_parameter_error() {
    let out = dwbc(&["compute", "--model", "sos-elliptic", "--n", "2", "--lambda", "1"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("λ on lattice Γ"), "{err}");
}

#[test]
fn determinant_route_needs_six_vertex() {
    let out = dwbc(&["compute", "--model", "sos-elliptic", "--route", "determinant"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn mismatched_list_length_is_a_parameter_error() {
    let out = dwbc(&["compute", "--n", "3", "--u", "0.1", "0.2", "--v", "0.3", "0.4"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(dwbc(&["compute", "--bogus"]).status.code() == Some(1));
}

#[test]
fn tolerance_failure_exits_two() {
    let (r, code) = json(&["compute", "--model", "six-vertex", "--n", "7", "--seed", "1", "--tolerance", "1e-18"]);
    assert_eq!(code, 2);
    assert_eq!(r["verdict"], "fail");
}

#[test]
fn recursion_suite() {
    let (r, code) = json(&["check", "recursion", "--n", "4", "--seed", "3"]);
    assert_eq!(code, 0);
    let res = r["residuals"].as_object().unwrap();
    assert_eq!(res.len(), 3);
    assert!(res.values().all(|v| v.as_f64().unwrap() < 1e-9));
}

#[test]
fn character_suite() {
    let (r, code) = json(&["check", "character", "--n", "3", "--seed", "5"]);
    assert_eq!(code, 0);
    let res = r["residuals"].as_object().unwrap();
    assert_eq!(res.len(), 2);
    assert!(res.values().all(|v| v.as_f64().unwrap() < 1e-9));
}

#[test]
fn degeneration_suite() {
    let (r, code) = json(&["check", "degeneration", "--n", "3"]);
    assert_eq!(code, 0, "{r}");
    assert!(r["residuals"].as_object().unwrap().len() >= 5);
}

#[test]
fn unknown_suite() {
    assert_eq!(dwbc(&["check", "nonsense"]).status.code(), Some(1));
}

#[test]
fn bench_counts_and_schema() {
    let (r, code) = json(&["bench", "--model", "six-vertex", "--n", "5"]);
    assert_eq!(code, 0);
    for key in ["command", "config", "results", "comparisons", "verdict", "residuals"] {
        assert!(r.get(key).is_some(), "missing {key}");
    }
    let counts: Vec<u64> = r["results"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|x| x["route"] == "enumerate")
        .map(|x| x["terms"].as_u64().unwrap())
        .collect();
    assert_eq!(counts, [1, 2, 7, 42, 429]);
    for rec in r["results"].as_array().unwrap() {
        assert!(rec["value"].as_array().unwrap().len() == 2);
        assert!(rec["time_ms"].as_f64().unwrap() >= 0.0);
    }
    let again: Value = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
    assert_eq!(again, r);
}

#[test]
fn identical_configuration_is_reproducible() {
    let args = ["compute", "--model", "sos-elliptic", "--n", "4", "--seed", "11", "--tau", "0.3+0.8i"];
    let (a, _) = json(&args);
    let (b, _) = json(&args);
    let values = |r: &Value| r["results"].as_array().unwrap().iter().map(|x| x["value"].clone()).collect::<Vec<_>>();
    assert_eq!(values(&a), values(&b));
}

#[test]
fn parallel_matches_sequential() {
    let base = ["compute", "--model", "sos-elliptic", "--n", "5", "--seed", "2", "--route", "sum"];
    let (a, _) = json(&base);
    let mut par = base.to_vec();
    par.push("--parallel");
    let (b, _) = json(&par);
    let (ar, ai) = complex(&a["results"][0]["value"]);
    let (br, bi) = complex(&b["results"][0]["value"]);
    let norm = ar.hypot(ai);
    assert!((ar - br).hypot(ai - bi) <= 1e-12 * norm);
}
