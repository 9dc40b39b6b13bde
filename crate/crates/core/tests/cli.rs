use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn varisk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_varisk"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn compare_pareto_pair_is_harmful() {
    let v = json(&varisk(&["compare", "--x", "pareto:1,1", "--y", "pareto:1,1", "--dep", "independent", "--alpha", "0.99"]));
    assert_eq!(v["verdict"], "harmful");
    assert!((v["var_of_sum"].as_f64().unwrap() - 205.184_623_020_068_4).abs() < 1e-8);
}

#[test]
fn compare_normal_pair_is_beneficial_and_comonotone_is_neutral() {
    let v = json(&varisk(&["compare", "--x", "normal:0,1", "--y", "normal:0,1", "--alpha", "0.99"]));
    assert_eq!(v["verdict"], "beneficial");
    let v = json(&varisk(&["compare", "--x", "pareto:1,1", "--y", "exp:1", "--dep", "comonotone", "--alpha", "0.9"]));
    assert_eq!(v["verdict"], "neutral");
}

#[test]
fn crossover_exponential_pair() {
    let v = json(&varisk(&["crossover", "--x", "exp:1", "--y", "exp:1"]));
    let roots = v["crossovers"].as_array().unwrap();
    assert_eq!(roots.len(), 1);
    assert!((roots[0].as_f64().unwrap() - 0.715_331_9).abs() < 5e-7);
}

#[test]
fn eggs_equal_thetas() {
    let v = json(&varisk(&["eggs", "--n", "10", "--theta1", "0.2", "--theta2", "0.2"]));
    assert_eq!(v["long_run"], "indifferent");
    assert_eq!(v["expected_single"], 4.0);
    assert_eq!(v["long_run_prefers_split"], false);
}

#[test]
fn aggregate_comonotone_three_components() {
    let v = json(&varisk(&[
        "aggregate", "--x", "exp:1", "--y", "exp:1", "--also", "exp:1", "--dep", "comonotone", "--alpha", "0.9",
    ]));
    assert!((v["var_of_sum"].as_f64().unwrap() - 3.0 * 10f64.ln()).abs() < 1e-12);
    assert_eq!(v["components"].as_array().unwrap().len(), 3);
}

#[test]
fn oracle_is_deterministic_per_seed() {
    let args = ["oracle", "--x", "exp:1", "--y", "exp:1", "--dep", "independent", "--alpha", "0.95", "--samples", "20000", "--seed", "11"];
    let a = varisk(&args);
    let b = varisk(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["seed"], 11);
    assert_eq!(v["samples"], 20000);
}

#[test]
fn oracle_defaults_to_seed_zero() {
    let v = json(&varisk(&["oracle", "--x", "exp:1", "--y", "exp:1", "--dep", "comonotone", "--alpha", "0.5", "--samples", "10000"]));
    assert_eq!(v["seed"], 0);
}

#[test]
fn exit_codes() {
    let usage = varisk(&["var", "--x", "pareto:1,1", "--alpha", "1.5"]);
    assert_eq!(usage.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&usage.stderr).contains("alpha must lie in (0,1)"));

    assert_eq!(varisk(&[]).status.code(), Some(2));

    let failed = varisk(&[
        "compare", "--x", "pareto:1,1", "--y", "pareto:1,1", "--alpha", "0.9", "--no-fast-paths", "--max-subdivisions", "1",
    ]);
    assert_eq!(failed.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&failed.stderr).starts_with("NonConvergence"));
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.csv");
    let out = varisk(&[
        "plot-data", "--x", "exp:1", "--y", "exp:1", "--points", "8", "--format", "csv", "--out", path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(path).unwrap();
    assert!(text.starts_with("alpha,g_alpha\n"));
    assert_eq!(text.lines().count(), 9);
}

#[test]
fn plot_data_json_reparses() {
    let v = json(&varisk(&["plot-data", "--x", "exp:1", "--y", "exp:1", "--points", "16"]));
    let points = v["points"].as_array().unwrap();
    assert_eq!(points.len(), 16);
    assert!(points.iter().all(|p| p["alpha"].is_f64() && p["g_alpha"].is_f64()));
}

const SCENARIO: &str = r#"{
  "positions": {
    "claims": {"family": "pareto", "beta": 1.0, "delta": 1.0},
    "expenses": {"family": "exponential", "rate": 1.0},
    "shifted": {"family": "affine", "inner": {"family": "normal", "mu": 0.0, "sigma": 1.0}, "scale": 2.0, "offset": 3.0}
  },
  "tasks": [
    {"kind": "var", "position": "claims", "alpha": 0.99},
    {"kind": "aggregate", "positions": ["claims", "expenses", "shifted"], "dependence": "comonotone", "alpha": 0.9},
    {"kind": "compare", "x": "claims", "y": "claims", "alpha": 0.99},
    {"kind": "crossover", "x": "expenses", "y": "expenses", "grid": 256},
    {"kind": "plot-data", "x": "expenses", "y": "expenses", "points": 4},
    {"kind": "eggs", "n": 5, "theta1": 0.3, "theta2": 0.2},
    {"kind": "oracle", "positions": ["expenses", "expenses"], "dependence": "independent", "alpha": 0.95, "samples": 20000}
  ],
  "seed": 5
}"#;

#[test]
fn scenario_runs_every_task() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "s.json", SCENARIO);
    let v = json(&varisk(&["--scenario", &path]));
    assert_eq!(v["seed"], 5);
    let results = v["results"].as_array().unwrap();
    let kinds: Vec<_> = results.iter().map(|r| r["command"].as_str().unwrap()).collect();
    assert_eq!(kinds, ["var", "aggregate", "compare", "crossover", "plot-data", "eggs", "oracle"]);
    assert_eq!(results[0]["label"], "claims");
    assert_eq!(results[2]["verdict"], "harmful");
    assert_eq!(results[5]["single_trip_prefers_split"], false);
    assert_eq!(results[5]["long_run_prefers_split"], true);
    assert_eq!(results[6]["seed"], 5);
}

#[test]
fn scenario_output_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "s.json", SCENARIO);
    let a = varisk(&["--scenario", &path]);
    let b = varisk(&["--scenario", &path]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let c = varisk(&["--scenario", &path, "--seed", "6"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn scenario_errors_are_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let undefined = write(dir.path(), "u.json", &SCENARIO.replace(r#""position": "claims""#, r#""position": "nope""#));
    let out = varisk(&["--scenario", &undefined]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.starts_with("ValidationError: tasks[0].position"), "{err}");

    let malformed = write(dir.path(), "m.json", "{\"positions\": {}, \"tasks\": [");
    let out = varisk(&["--scenario", &malformed]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("ParseError"));

    let out = varisk(&["--scenario", &undefined, "var", "--x", "exp:1", "--alpha", "0.5"]);
    assert_eq!(out.status.code(), Some(2));
}
