//! End-to-end tests of the `sbo` binary: exit codes, JSON Lines shape,
//! and report determinism.

use std::process::{Command, Output};

fn sbo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sbo"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn records(out: &Output) -> Vec<serde_json::Value> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).expect("valid JSON line"))
        .collect()
}

#[test]
fn check_conditions_passes_for_catalogue_descriptor() {
    let out = sbo(&["check-conditions", "rank1:C:2:1", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let recs = records(&out);
    assert_eq!(recs.len(), 1);
    let o = &recs[0]["outputs"];
    for key in ["G", "H", "D", "sigma_w0"] {
        assert_eq!(o[key], serde_json::json!(true), "{}", key);
    }
    assert_eq!(recs[0]["pass"], serde_json::json!(true));
    assert!(recs[0]["tolerances"]["witness"].is_number());
}

#[test]
fn check_domain_negative_answer_is_not_a_failure() {
    let out = sbo(&["check-domain", "siegel:3:1", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let recs = records(&out);
    assert_eq!(recs[0]["outputs"]["D"], serde_json::json!(false));
    assert_eq!(recs[0]["pass"], serde_json::json!(true));
}

#[test]
fn enumerate_gl_lists_four_orbits_with_one_open() {
    let out = sbo(&["enumerate-gl", "1", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let recs = records(&out);
    assert_eq!(recs.len(), 4);
    let open: Vec<_> = recs
        .iter()
        .filter(|r| r["outputs"]["open"] == serde_json::json!(true))
        .collect();
    assert_eq!(open.len(), 1);
    let o = &open[0]["outputs"];
    assert_eq!(
        (o["k"].as_u64(), o["l1"].as_u64(), o["l2"].as_u64(), o["m"].as_u64()),
        (Some(2), Some(0), Some(1), Some(1))
    );
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(sbo(&["check-conditions", "nosuch:1"]).status.code(), Some(2));
    assert_eq!(
        sbo(&["eval-kernel", "rank1:C:2:1", "--tol", "bogus=1"]).status.code(),
        Some(2)
    );
    assert_eq!(sbo(&["bogus-subcommand"]).status.code(), Some(2));
}

#[test]
fn numerical_failure_exits_1_with_residual_in_report() {
    let out = sbo(&["knapp-stein", "ks:R:3", "--tol", "spread=1e-30", "--json"]);
    assert_eq!(out.status.code(), Some(1));
    let recs = records(&out);
    assert_eq!(recs[0]["pass"], serde_json::json!(false));
    assert!(recs[0]["residuals"]["spread"].as_f64().unwrap() > 1e-30);
}

#[test]
fn reports_are_deterministic_per_config_and_seed() {
    let a = sbo(&["eval-kernel", "rank1:H:2:1", "--seed", "11", "--json"]);
    let b = sbo(&["eval-kernel", "rank1:H:2:1", "--seed", "11", "--json"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let c = sbo(&["eval-kernel", "rank1:H:2:1", "--seed", "12", "--json"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn out_flag_writes_the_same_report_to_a_file() {
    let dir = std::env::temp_dir().join("sbo-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.jsonl");
    let direct = sbo(&["params", "rank1:C:2:1", "--alpha", "1.2", "--beta", "0.7", "--json"]);
    let filed = sbo(&[
        "params", "rank1:C:2:1", "--alpha", "1.2", "--beta", "0.7", "--json", "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(filed.status.code(), Some(0));
    assert!(filed.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), direct.stdout);
}

#[test]
fn subspace_csv_is_classified() {
    let dir = std::env::temp_dir().join("sbo-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("span.csv");
    // spanning vectors (one per CSV row) of an open-orbit plane in R^4
    let orbit = sbo_core::orbits::enumerate_gl(1)
        .into_iter()
        .find(|o| (o.k, o.l1, o.l2, o.m) == (2, 0, 1, 1))
        .expect("open orbit exists");
    let span = orbit.representative();
    let mut csv = String::new();
    for j in 0..span.cols {
        let row: Vec<String> = (0..span.rows).map(|i| span.get(i, j).to_string()).collect();
        csv.push_str(&row.join(","));
        csv.push('\n');
    }
    std::fs::write(&path, csv).unwrap();
    let out = sbo(&["orbits", "gl4R:gl2C:1", "--subspace", path.to_str().unwrap(), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let recs = records(&out);
    let o = &recs[0]["outputs"];
    assert_eq!(o["k"].as_u64(), Some(2));
    assert_eq!(o["open"], serde_json::json!(true));
}

#[test]
fn verify_intertwiner_small_order_passes() {
    let out = sbo(&[
        "verify-intertwiner", "rank1:R:3:1", "--alpha", "1.3", "--beta", "0.8", "--order",
        "16", "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let recs = records(&out);
    assert!(recs[0]["residuals"]["intertwining"].as_f64().unwrap() < 1e-2);
}
