use std::path::PathBuf;
use std::process::Command;

use clap::Parser;
use serde_json::Value;
use skewpoisson::scenario::{ScenarioConfig, BUNDLED_CONFIG};
use skewpoisson_cli::{run, Cli, Report, Status};

fn report(args: &[&str]) -> Report {
    let mut full = vec!["skewpoisson"];
    full.extend_from_slice(args);
    run(&Cli::parse_from(full))
}

fn write_config(name: &str, edit: impl FnOnce(&mut Value)) -> PathBuf {
    let mut v: Value = serde_json::from_str(BUNDLED_CONFIG).unwrap();
    edit(&mut v);
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(format!("{name}.json"));
    std::fs::write(&path, serde_json::to_string_pretty(&v).unwrap()).unwrap();
    path
}

fn binary(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_skewpoisson"))
        .args(args)
        .output()
        .unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

#[test]
fn bundled_obstruction() {
    let r = report(&["obstruction"]);
    assert_eq!(r.exit_code, 0);
    assert_eq!(r.verdict, "INFEASIBLE_ALL_DEGREES, witness x4");
    assert_eq!(r.stage("target").unwrap().payload["target"], "2*x3^2");
    let certs = r.stage("ladder").unwrap().payload["certificates"]
        .as_array()
        .unwrap()
        .clone();
    assert_eq!(certs.len(), 9);
    assert!(certs.iter().all(|c| c["divisor_witness"] == "x4"));
}

#[test]
fn machine_output_is_byte_identical() {
    let (code_a, a) = binary(&["obstruction", "--format", "machine"]);
    let (code_b, b) = binary(&["obstruction", "--format", "machine"]);
    assert_eq!((code_a, code_b), (0, 0));
    assert_eq!(a, b);
    let v: Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["command"], "obstruction");
}

#[test]
fn feasible_variant() {
    let path = write_config("feasible_variant", |v| {
        v["obstruction"]["psi"] = "h1".into();
        v["obstruction"]["phi"] = "h1".into();
    });
    let r = report(&["obstruction", "--config", path.to_str().unwrap()]);
    assert_eq!(r.exit_code, 0);
    assert_eq!(r.verdict, "FEASIBLE, sigma = 0");
}

#[test]
fn sparse_ladder_is_monotone() {
    let path = write_config("sparse_ladder", |v| {
        v["obstruction"]["degree_ladder"] = serde_json::json!([0, 2, 4, 8]);
    });
    let r = report(&["obstruction", "--config", path.to_str().unwrap(), "--format", "machine"]);
    let certs = r.stage("ladder").unwrap().payload["certificates"]
        .as_array()
        .unwrap()
        .clone();
    let degrees: Vec<_> = certs.iter().map(|c| c["degree_bound"].as_u64().unwrap()).collect();
    assert_eq!(degrees, vec![0, 2, 4, 8]);
    let ranks: Vec<_> = certs.iter().map(|c| c["rank"]["rank"].as_u64().unwrap()).collect();
    assert!(ranks.windows(2).all(|w| w[0] <= w[1]), "{ranks:?}");
    for c in &certs {
        assert_ne!(c["verdict"], "FEASIBLE");
        assert_eq!(
            c["rank"]["augmented_rank"].as_u64().unwrap(),
            c["rank"]["rank"].as_u64().unwrap() + 1
        );
    }
}

#[test]
fn degree_flag_replaces_ladder() {
    let r = report(&["obstruction", "--degree", "3"]);
    let certs = r.stage("ladder").unwrap().payload["certificates"]
        .as_array()
        .unwrap()
        .clone();
    assert_eq!(certs.len(), 1);
    assert_eq!(certs[0]["degree_bound"], 3);
}

#[test]
fn config_errors_carry_paths() {
    let path = write_config("unknown_key", |v| {
        v["obstruction"]["colour"] = "red".into();
    });
    let (code, out) = binary(&["obstruction", "--config", path.to_str().unwrap(), "--format", "machine"]);
    assert_eq!(code, 2);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["verdict"], "CONFIG_ERROR");
    assert_eq!(v["stages"][0]["status"], "error");
    assert!(v["stages"][0]["payload"]["path"]
        .as_str()
        .unwrap()
        .starts_with("obstruction"));

    let path = write_config("identity_class", |v| {
        v["obstruction"]["class_rep"] = "b^2".into();
    });
    let r = report(&["obstruction", "--config", path.to_str().unwrap()]);
    assert_eq!(r.exit_code, 2);
    assert_eq!(r.stage("class").unwrap().payload["path"], "obstruction.class_rep");

    let r = report(&["group", "--config", "/nonexistent/scenario.json"]);
    assert_eq!(r.exit_code, 2);
    assert_eq!(r.stage("config").unwrap().status, Status::Error);
}

#[test]
fn group_table() {
    let r = report(&["group"]);
    assert_eq!(r.verdict, "order 8, 5 classes");
    let classes = &r.stage("classes").unwrap().payload["classes"];
    assert_eq!(classes[1]["members"], serde_json::json!(["b", "c"]));
    assert_eq!(classes[1]["centralizer"].as_array().unwrap().len(), 4);
}

#[test]
fn trivial_group_and_flagged_generator() {
    let path = write_config("trivial_group", |v| {
        v["group_generators"] = serde_json::json!([]);
    });
    let r = report(&["group", "--config", path.to_str().unwrap()]);
    assert_eq!(r.verdict, "order 1, 1 classes");

    let path = write_config("non_symplectic", |v| {
        v["group_generators"] = serde_json::json!([
            { "name": "s", "matrix": [["2", "0", "0", "0"], ["0", "1", "0", "0"], ["0", "0", "1", "0"], ["0", "0", "0", "1"]] }
        ]);
        v["group_cap"] = 4.into();
    });
    let r = report(&["group", "--config", path.to_str().unwrap()]);
    // diag(2,1,1,1) has infinite order, so the closure hits the cap.
    assert_eq!(r.exit_code, 2);

    let path = write_config("non_symplectic_finite", |v| {
        v["group_generators"] = serde_json::json!([
            { "name": "s", "matrix": [["-1", "0", "0", "0"], ["0", "1", "0", "0"], ["0", "0", "1", "0"], ["0", "0", "0", "1"]] }
        ]);
    });
    let r = report(&["group", "--config", path.to_str().unwrap()]);
    let elements = r.stage("elements").unwrap();
    assert_eq!(elements.status, Status::Flagged);
    assert_eq!(elements.payload["not_symplectic"], serde_json::json!(["s"]));
    assert!(r.to_text().contains("NO"));
}

#[test]
fn invariants_report() {
    let r = report(&["invariants"]);
    assert_eq!(r.exit_code, 0);
    assert_eq!(r.verdict, "CONFIRMED");
    assert_eq!(
        r.stage("relations").unwrap().payload["residuals"]
            .as_array()
            .unwrap()
            .len(),
        9
    );
    assert!(r.to_text().contains("8/8 invariant"));
}

#[test]
fn invariants_findings() {
    let path = write_config("empty_relations", |v| {
        v["relation_set"] = serde_json::json!([]);
    });
    let r = report(&["invariants", "--config", path.to_str().unwrap(), "--degree", "4"]);
    assert_eq!(
        r.stage("relations").unwrap().payload["residuals"],
        serde_json::json!([])
    );
    assert_eq!(r.exit_code, 0);

    let path = write_config("corrupted_generator", |v| {
        v["named_polynomials"]["h1"] = "x1*x2 + x3^2".into();
        v["relation_set"] = serde_json::json!([]);
    });
    let r = report(&["invariants", "--config", path.to_str().unwrap(), "--degree", "2"]);
    assert_eq!(
        r.stage("invariance").unwrap().payload["not_invariant"],
        serde_json::json!(["h1"])
    );
    assert_eq!(r.exit_code, 1);
}

#[test]
fn bracket_and_project() {
    let r = report(&["bracket", "f1", "h1"]);
    assert_eq!(r.verdict, "2*x1^2 + 2*x3^2");
    let r = report(&["bracket", "x1", "x2"]);
    assert_eq!(r.verdict, "1");
    let r = report(&["project", "2*x1^2 + 2*x3^2@b", "--class", "c"]);
    assert_eq!(r.verdict, "2*x3^2*b");
    let r = report(&["project", "x1@e*b"]);
    assert_eq!(
        r.stage("projection").unwrap().payload["components"]
            .as_array()
            .unwrap()
            .len(),
        5
    );
    let r = report(&["project", "x1@z"]);
    assert_eq!(r.exit_code, 2);
}

#[test]
fn selftest_outcomes() {
    let r = report(&["selftest", "--seed", "99", "--cases", "20"]);
    assert_eq!(r.verdict, "ALL PASS");
    let (code, out) = binary(&["selftest", "--cases", "2", "--corrupt-table"]);
    assert_eq!(code, 3);
    assert!(out.contains("FAILED: group_table"));
}

#[test]
fn bundled_round_trips() {
    let cfg = ScenarioConfig::bundled();
    assert_eq!(ScenarioConfig::from_json(&cfg.to_json()).unwrap(), cfg);
}
