use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn toda(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_toda")).args(args).env_remove("TODA_CACHE_DIR").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let o = toda(args);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn pq_b3_closed_form() {
    let v = json(&["pq", "--type", "B3"]);
    assert_eq!(v["p"], "(q-1)(q^2-1)(q^3-1)");
    assert_eq!(v["matches_closed_form"], true);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["coeffs"], serde_json::json!([-1, 1, 1, 0, -1, -1, 1]));
}

#[test]
fn pq_vanishes_off_all_minus() {
    let v = json(&["pq", "--type", "A2", "--sign", "-+"]);
    assert_eq!(v["p"], "0");
    assert_eq!(v["matches_closed_form"], false);
}

#[test]
fn graph_a3_dot() {
    let o = toda(&["graph", "--type", "A3", "--sign", "---", "--format", "dot"]);
    assert!(o.status.success());
    let dot = stdout(&o);
    assert!(dot.lines().take(3).any(|l| l.starts_with("//") && l.contains("10 connected components")));
    assert_eq!(dot.lines().filter(|l| l.contains("[label=")).count(), 24);
}

#[test]
fn schur_g2_real_roots() {
    let v = json(&["schur", "--type", "G2", "--experiment", "real-roots", "--samples", "20", "--seed", "7"]);
    assert_eq!(v["report"]["modal_count"], 4);
    assert_eq!(v["report"]["expected"], 4);
}

#[test]
fn schur_taus_and_hirota() {
    let v = json(&["schur", "--type", "C2", "--hirota"]);
    assert_eq!(v["minimal_degrees"], serde_json::json!([1, 2]));
    assert_eq!(v["t1_degree"], 7);
    assert!(v["taus"][0]["hirota_constant"].is_string());
}

#[test]
fn output_is_reproducible_across_threads() {
    let args = |t: &'static str| vec!["schur", "--type", "B2", "--experiment", "real-roots", "--seed", "3", "--threads", t];
    let one = toda(&args("1"));
    let four = toda(&args("4"));
    assert!(one.status.success());
    assert_eq!(one.stdout, four.stdout);
    assert_eq!(toda(&["eta", "--type", "G2", "--format", "csv"]).stdout, toda(&["eta", "--type", "G2", "--format", "csv"]).stdout);
}

#[test]
fn exit_codes() {
    assert_eq!(toda(&["pq", "--type", "B3", "--sign", "++"]).status.code(), Some(1));
    assert_eq!(toda(&["pq", "--type", "X9"]).status.code(), Some(1));
    assert_eq!(toda(&["pq", "--type", "B3", "--format", "dot"]).status.code(), Some(1));
    assert_eq!(toda(&["verify", "--scope", ""]).status.code(), Some(1));
    assert_eq!(toda(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(toda(&["--help"]).status.code(), Some(0));
    // A tau-function system above the rank cap is a computational limit, not bad input.
    assert_eq!(toda(&["schur", "--type", "A7"]).status.code(), Some(2));
    assert!(toda(&["chevalley", "--type", "A1", "--q", "9"]).status.success());
    let bad = toda(&["chevalley", "--type", "A1", "--q", "6"]);
    assert_eq!(bad.status.code(), Some(1));
    let doc: Value = serde_json::from_slice(&bad.stderr).unwrap();
    assert_eq!(doc["error"]["code"], "invalid-q");
}

#[test]
fn affine_admissibility_and_guess() {
    assert_eq!(toda(&["affine", "--type", "A2^(1)", "--sign", "---"]).status.code(), Some(1));
    let v = json(&["affine", "--type", "A1^(1)", "--lmax", "14"]);
    assert_eq!(v["guess"], "(1 - q)/(1 + q)");
    let v = json(&["affine", "--type", "A2^(1)", "--sign", "--+"]);
    assert_eq!(v["stable_prefix"], serde_json::json!([0, 0, 0]));
}

#[test]
fn ode_csv_and_blowup() {
    let o = toda(&["ode", "--type", "A1", "--a", "1", "--b", "0", "--format", "csv"]);
    assert!(stdout(&o).starts_with("t,a1,b1,invariant\n"));
    let v = json(&["ode", "--type", "A1", "--a=-3", "--b", "2", "--t-min", "-3", "--t-max", "3"]);
    let ev = &v["events"][0];
    assert!((ev["time"].as_f64().unwrap() + 0.5f64.atanh()).abs() < 1e-5);
    let v = json(&["ode", "--type", "A2", "--a=-0.3,-0.2", "--b", "2,1.5", "--t-min", "-30", "--t-max", "30", "--tau-window", "30"]);
    assert_eq!(v["tau_crossings"]["total"], 2);
    assert_eq!(v["tau_crossings"]["agrees"], true);
}

#[test]
fn chevalley_brute_force() {
    let v = json(&["chevalley", "--type", "A2", "--q", "3", "--brute-force"]);
    assert_eq!(v["order"], "24");
    assert_eq!(v["brute_force"]["agrees"], true);
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.json");
    let o = toda(&["graph", "--type", "A2", "--out", path.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["component_count"], 4);
}

fn cache_json(dir: &Path, action: &str) -> Value {
    json(&["cache", action, "--cache-dir", dir.to_str().unwrap()])
}

#[test]
fn cache_lifecycle() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("cache");
    assert_eq!(cache_json(&dir, "clear")["removed"], 0);
    assert_eq!(cache_json(&dir, "list")["entries"], serde_json::json!([]));
    json(&["pq", "--type", "B3", "--cache-dir", dir.to_str().unwrap()]);
    let listed = cache_json(&dir, "list");
    let entries = listed["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 1);
    assert!(entries[0]["bytes"].as_u64().unwrap() > 0);
    let file = dir.join(entries[0]["file"].as_str().unwrap());
    std::fs::write(&file, "not json").unwrap();
    let o = toda(&["pq", "--type", "B3", "--cache-dir", dir.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("regenerating"));
    assert!(std::fs::read_to_string(&file).unwrap().starts_with('{'));
    assert_eq!(cache_json(&dir, "clear")["removed"], 1);
    assert_eq!(cache_json(&dir, "clear")["removed"], 0);
    assert_eq!(toda(&["cache", "list"]).status.code(), Some(1));
}

#[test]
fn verify_fast_passes() {
    let v = json(&["verify"]);
    assert_eq!(v["all_passed"], true);
    assert_eq!(v["rows"].as_array().unwrap().len(), 13);
}
