use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;
use tangleforge::cli::{cmd_bound, EXIT_AUDIT, EXIT_INPUT, EXIT_OK};

fn tangleforge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tangleforge")).args(args).output().expect("binary runs")
}

fn json_of(args: &[&str]) -> Value {
    let out = tangleforge(args);
    assert_eq!(out.status.code(), Some(EXIT_OK), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn assert_matches_schema(doc: &Value, name: &str) {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("schemas").join(format!("{name}.schema.json"));
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&schema).expect("schema compiles");
    let errors: Vec<String> = validator.iter_errors(doc).map(|e| format!("{} at {}", e, e.instance_path())).collect();
    assert!(errors.is_empty(), "{name}: {errors:?}");
}

#[test]
fn json_reports_match_their_schemas() {
    let fast = ["--restarts", "2"];
    let cases: Vec<(&str, Vec<&str>)> = vec![
        ("measures", vec!["measures", "ghz"]),
        ("measures", vec!["measures", "sigma:x=0.9"]),
        ("sigma-curve", vec!["sigma-curve", "--steps", "5", "--format", "json"]),
        ("sigma-curve", vec!["sigma-curve", "--roof", "--steps", "2", "--x-min", "0.9", "--format", "json"]),
        ("char-curves", vec!["char-curves", "--steps", "3", "--phi-grid", "8", "--format", "json"]),
        ("roof", vec!["roof", "sigma:x=0.95"]),
        ("roof", vec!["roof", "pi-ghz", "--measure", "one_tangle_A"]),
        ("polyhedron", vec!["polyhedron", "sigma:x=0.75"]),
        ("polyhedron", vec!["polyhedron", "ghz"]),
        ("ems", vec!["ems", "psi5"]),
        ("bound", vec!["bound", "--xi", "0.5", "--x", "0.9", "--y", "0.3"]),
    ];
    for (schema, mut args) in cases {
        args.extend(fast);
        let doc = json_of(&args);
        assert_eq!(doc["command"], schema);
        assert_matches_schema(&doc, schema);
    }
}

#[test]
fn same_seed_writes_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    let paths: Vec<PathBuf> = (0..2).map(|i| dir.path().join(format!("run{i}.json"))).collect();
    for p in &paths {
        let out = tangleforge(&["roof", "sigma:x=0.9", "--restarts", "3", "--seed", "11", "--out", p.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(EXIT_OK));
        assert!(out.stdout.is_empty());
    }
    let (a, b) = (std::fs::read(&paths[0]).unwrap(), std::fs::read(&paths[1]).unwrap());
    assert!(!a.is_empty());
    assert_eq!(a, b);
}

#[test]
fn input_errors_exit_with_two() {
    for args in [
        vec!["measures", "no-such-state"],
        vec!["bound", "--xi", "0.5", "--x", "0.9", "--y", "0.8"],
        vec!["sigma-curve", "--steps", "1"],
        vec!["sigma-curve", "--no-such-flag"],
        vec!["measures", "/nonexistent/state.json"],
        vec!["ems", "pi-ghz"],
    ] {
        let out = tangleforge(&args);
        assert_eq!(out.status.code(), Some(EXIT_INPUT), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
    assert_eq!(tangleforge(&["--help"]).status.code(), Some(EXIT_OK));
}

#[test]
fn failed_audits_map_to_three() {
    let mut report = cmd_bound(0.5, 0.9, 0.3).unwrap();
    assert_eq!(report.exit_code(), EXIT_OK);
    report.failures.push("forced".into());
    assert_eq!(report.exit_code(), EXIT_AUDIT);
}

#[test]
fn pi_ghz_surfaces_the_one_tangle_gap() {
    let doc = json_of(&["measures", "pi-ghz", "--restarts", "2"]);
    assert!(doc["tau3"].as_f64().unwrap() < 1e-6);
    assert!((doc["one_tangle_closed_form"].as_f64().unwrap() - 5.0 / 9.0).abs() < 1e-9);
    assert!(doc["one_tangle_roof_upper"].as_f64().unwrap() <= 1.0 / 3.0 + 1e-6);
    assert_eq!(doc["discrepancy"], true);
    assert!((doc["pi_tangle"].as_f64().unwrap() - 1.0 / 9.0).abs() < 1e-9);
}

#[test]
fn csv_tables_keep_column_order() {
    let out = tangleforge(&["sigma-curve", "--steps", "3"]);
    assert_eq!(out.status.code(), Some(EXIT_OK));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "x,tau3_analytic,alpha_I,one_tangle_closed_form,monogamy_slack,pair_concurrence_max");
    let rows: Vec<&str> = lines.clone().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows.len(), 3);
    assert!(rows[0].starts_with("0,") && rows[2].starts_with("1,"));
    assert!(text.lines().any(|l| l.starts_with("# min_monogamy_slack=")));

    let out = tangleforge(&["char-curves", "--steps", "2", "--phi-grid", "8"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next().unwrap(), "x,min_curve,envelope,tau_sigma_analytic,abs_diff");
}

#[test]
fn pure_state_outputs() {
    let ghz = json_of(&["measures", "ghz"]);
    assert_eq!(ghz["tau3"], 1.0);
    assert_eq!(ghz["tau3_source"], "exact");
    let ems = json_of(&["ems", "psi5"]);
    assert!((ems["e_ms"].as_f64().unwrap() - 43.0 / 45.0).abs() < 1e-10);
    let csv = String::from_utf8(tangleforge(&["bound", "--xi", "1", "--x", "1", "--y", "0", "--format", "csv"]).stdout).unwrap();
    assert!(csv.starts_with("field,value\n"));
    assert!(csv.lines().any(|l| l == "bound,1"), "{csv}");
}
