use std::process::{Command, Output};

use hypplane::runner::{self, RunConfig};
use serde_json::Value;

fn hypplane(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hypplane")).args(args).output().expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("report is valid JSON")
}

fn assert_exit_matches_pass(out: &Output, r: &Value) {
    let pass = r["pass"].as_bool().unwrap();
    let all_checks = r["checks"].as_array().unwrap().iter().all(|c| c["status"] == "pass");
    assert_eq!(pass, all_checks);
    assert_eq!(out.status.code(), Some(if pass { 0 } else { 1 }));
}

#[test]
fn example7_verify_reports_one_cusp() {
    let out = hypplane(&["example7", "verify"]);
    let r = report(&out);
    assert_eq!(r["result"]["conclusions"]["cusp_count"], 1);
    assert_eq!(r["result"]["conclusions"]["is_division_algebra"], true);
    assert_eq!(r["result"]["conclusions"]["landherr_involution_exists"], false);
    assert_eq!(r["result"]["local_data"].as_array().unwrap().len(), 3);
    assert_exit_matches_pass(&out, &r);
    assert_eq!(out.status.code(), Some(1));
    let failing: Vec<&str> = r["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["status"] == "fail")
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert_eq!(failing, ["inv_p + inv_pbar = 0 mod 1", "inv at (sqrt(-7)) = 0", "an involution of the second kind exists"]);
}

#[test]
fn cusps_for_minus_23() {
    let out = hypplane(&["cusps", "--disc", "-23"]);
    let r = report(&out);
    assert_eq!(r["result"]["class_number"], 3);
    assert_eq!(r["result"]["disc"], -23);
    assert_eq!(r["result"]["representatives"], serde_json::json!(["(1, 1, 6)", "(2, -1, 3)", "(2, 1, 3)"]));
    assert!(!r["result"]["pairs"].as_array().unwrap().is_empty());
    assert_exit_matches_pass(&out, &r);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn all_is_deterministic() {
    let a = hypplane(&["all", "--seed", "42"]);
    let b = hypplane(&["all", "--seed", "42"]);
    assert_eq!(a.stdout, b.stdout);
    let r = report(&a);
    assert_exit_matches_pass(&a, &r);
    assert_eq!(r["command"], "all");
    assert_eq!(r["seed"], 42);
}

#[test]
fn seed_changes_sampled_checks_only() {
    let cfg = |seed| RunConfig { seed, ..RunConfig::default() };
    let a = runner::run(&runner::Command::Algebra, &cfg(1)).unwrap();
    let b = runner::run(&runner::Command::Algebra, &cfg(2)).unwrap();
    let names = |r: &runner::Report| r.checks.iter().map(|c| c.name.clone()).collect::<Vec<_>>();
    assert_eq!(names(&a), names(&b));
    assert!(a.pass && b.pass);
}

#[test]
fn moduli_commands() {
    let out = hypplane(&["moduli", "gram", "--case", "d1", "--disc", "-7"]);
    let r = report(&out);
    assert_eq!(r["result"]["elementary_divisors"], serde_json::json!(["1", "1", "1", "1"]));
    assert_eq!(r["result"]["scale"], "1/7");
    assert_eq!(out.status.code(), Some(0));
    let out = hypplane(&["moduli", "split", "--case", "d3"]);
    let r = report(&out);
    assert_eq!(r["result"]["algebra"]["summands"], 3);
    assert_eq!(r["result"]["companion"]["summands"], 3);
    assert_eq!(out.status.code(), Some(0));
    let out = hypplane(&["moduli", "split", "--case", "d2b"]);
    let r = report(&out);
    assert_eq!(r["result"]["quaternion_basis"]["ec_squared"], "-6");
    assert_eq!(r["result"]["splitting"]["order_index"], serde_json::json!(["2"]));
}

#[test]
fn config_errors_exit_with_two() {
    assert_eq!(hypplane(&["algebra", "--tolerance", "0"]).status.code(), Some(2));
    assert_eq!(hypplane(&["run", "--suite", "nothing"]).status.code(), Some(2));
    assert_eq!(hypplane(&["moduli", "gram", "--case", "d1"]).status.code(), Some(2));
    assert_eq!(hypplane(&["algebra", "--config", "/nonexistent/config.json"]).status.code(), Some(2));
    let dir = std::env::temp_dir().join(format!("hypplane-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(&bad, r#"{"samples": {"unknown": 3}}"#).unwrap();
    assert_eq!(hypplane(&["algebra", "--config", bad.to_str().unwrap()]).status.code(), Some(2));
    std::fs::write(&bad, r#"{"version": 9}"#).unwrap();
    assert_eq!(hypplane(&["algebra", "--config", bad.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn config_file_and_out_path() {
    let dir = std::env::temp_dir().join(format!("hypplane-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("cfg.json");
    std::fs::write(&cfg, r#"{"version": 1, "seed": 5, "tolerance": 1e-8, "samples": {"matrix_rep": 20, "relations": 10}}"#).unwrap();
    let out_path = dir.join("report.json");
    let out = hypplane(&["run", "--suite", "algebra", "--config", cfg.to_str().unwrap(), "--out", out_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(r["seed"], 5);
    assert_eq!(r["tolerance"], "1.000e-8");
    let rep = r["checks"].as_array().unwrap().iter().find(|c| c["name"] == "matrix_rep is a homomorphism on D7").unwrap();
    assert_eq!(rep["detail"]["samples"], 20);
    // flags override the file
    let out = hypplane(&["algebra", "--config", cfg.to_str().unwrap(), "--seed", "9"]);
    assert_eq!(report(&out)["seed"], 9);
}

#[test]
fn example7_probe() {
    let out = hypplane(&["example7", "probe", "--bound", "2"]);
    let r = report(&out);
    assert_eq!(r["result"]["witness"], Value::Null);
    assert_eq!(r["result"]["two_inert_in_l"], true);
    assert_eq!(out.status.code(), Some(0));
}
