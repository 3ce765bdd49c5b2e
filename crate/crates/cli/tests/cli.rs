//! End-to-end checks of the batch driver: report shape, exit codes, and
//! byte-identical determinism modulo the timing field.

use std::process::{Command, Stdio};

fn run(args: &[&str]) -> (String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_nesthilb"))
        .args(args)
        .stderr(Stdio::null())
        .output()
        .expect("binary runs");
    (
        String::from_utf8(out.stdout).unwrap(),
        out.status.code().unwrap_or(-1),
    )
}

fn strip_timing(report: &str) -> String {
    report
        .lines()
        .filter(|l| !l.contains("timing_ms"))
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn verify_initial_passes_and_exits_zero() {
    let (out, code) = run(&["verify-initial", "--n", "2"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["schema"], "1");
    assert_eq!(v["status"], "pass");
    assert_eq!(v["values"]["matches"], true);
}

#[test]
fn facet_counts_at_n5() {
    let (out, code) = run(&["complex-facets", "--n", "5"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["values"]["total"], 130);
    assert_eq!(v["values"]["last_column"], 80);
}

#[test]
fn bott_degree_matches_formula() {
    let (out, code) = run(&["bott-degree", "--n", "4"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["values"]["degree"], "50");
    assert_eq!(v["values"]["formula"], "50");
}

#[test]
fn reports_are_deterministic_modulo_timing() {
    for args in [
        vec!["fiber-check", "--n", "4", "--samples", "50", "--seed", "7"],
        vec!["complex-facets", "--n", "4", "--full"],
        vec!["deform-gin", "--ideal", "x + y, y^2", "--seed", "3"],
    ] {
        let (a, ca) = run(&args);
        let (b, cb) = run(&args);
        assert_eq!(ca, cb);
        assert_eq!(strip_timing(&a), strip_timing(&b), "args: {args:?}");
    }
}

#[test]
fn tangent_subcommand() {
    let (out, code) = run(&["tangent", "--i1", "x^2, y^2", "--i2", "x, y^2"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["values"]["tangent_dim"], 8);
}

#[test]
fn parse_errors_exit_nonzero() {
    let (out, code) = run(&["tangent", "--i1", "x +", "--i2", "x"]);
    assert_eq!(code, 2);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["status"], "fail");
    assert!(v["values"]["error"].as_str().unwrap().contains("parse error"));
}

#[test]
fn search_reducible_five_parts() {
    let (out, code) = run(&["search-reducible", "--parts", "5"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["values"]["r"], 19);
    assert_eq!(v["values"]["dim_grassmannian"], 363);
    assert_eq!(v["values"]["smoothable_bound"], 361);
}

#[test]
fn verify_intermediate_subcommand() {
    let (out, code) = run(&["verify-intermediate", "--n", "2", "--j", "2"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["values"]["initial_matches"], true);
    assert_eq!(v["values"]["deg2_homogeneous"], true);
}

#[test]
fn remaining_subcommands_smoke() {
    let (out, code) = run(&["verify-gb", "--n", "2"]);
    assert_eq!(code, 0, "{out}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["values"]["spair_pass"], true);
    assert_eq!(v["values"]["leading_monomials_pass"], true);

    let (out, code) = run(&["complex-homology", "--n", "2", "--char", "0"]);
    assert_eq!(code, 0, "{out}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["values"]["reisner_holds"], true);

    let (out, code) = run(&["bott-table", "--n", "4"]);
    assert_eq!(code, 0, "{out}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["values"]["entries"]["0,0"]["dim"], 1);
    assert_eq!(v["values"]["entries"]["4,2"]["tag"], "cancelling-pair");

    // the two construction routes emit identical generators
    let (div, _) = run(&["ideal", "--n", "2", "--route", "division"]);
    let (closed, _) = run(&["ideal", "--n", "2", "--route", "closed"]);
    let vd: serde_json::Value = serde_json::from_str(&div).unwrap();
    let vc: serde_json::Value = serde_json::from_str(&closed).unwrap();
    assert_eq!(vd["values"]["f"], vc["values"]["f"]);
    assert_eq!(vd["values"]["F"], vc["values"]["F"]);

    let (out, code) = run(&["deform-cleave", "--r", "3", "--pair"]);
    assert_eq!(code, 0, "{out}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["values"]["curvilinear_case"], "ord-1");
    assert_eq!(v["values"]["fat_point_case"], "fat-point");
}

#[test]
fn budget_exhaustion_is_a_distinct_status() {
    let (out, code) = run(&["verify-initial", "--n", "3", "--budget-pairs", "1"]);
    assert_eq!(code, 2);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["status"], "budget-exceeded");
}
