use std::process::Command;

use boolinfo::cli::{parse_function_spec, run_from, CliError};

fn run(args: &[&str]) -> (String, i32) {
    let mut full = vec!["boolinfo"];
    full.extend_from_slice(args);
    let outcome = run_from(full).unwrap();
    (outcome.output, outcome.exit_code)
}

fn field<'a>(text: &'a str, name: &str) -> &'a str {
    text.lines()
        .find_map(|l| {
            let mut parts = l.split_whitespace();
            (parts.next() == Some(name)).then(|| l[name.len()..].trim())
        })
        .unwrap_or_else(|| panic!("no field {name} in\n{text}"))
}

#[test]
fn analyze_dictator() {
    let (out, code) = run(&["analyze", "dictator:1@n=3", "--alpha", "0.25"]);
    assert_eq!(code, 0);
    let mi: f64 = field(&out, "mi_bits").parse().unwrap();
    assert!((mi - 0.188_721_876).abs() < 1e-9);
    assert_eq!(field(&out, "m2"), "0.25");
    for bound in ["conjectured", "quadratic", "theorem1", "moment_bound_k1"] {
        let v: f64 = field(&out, bound).parse().unwrap();
        assert!(v >= mi - 1e-9, "{bound}");
    }
    assert_eq!(field(&out, "general_t3"), "n/a (premise)");
}

#[test]
fn analyze_hex_table_and_errors() {
    let (out, _) = run(&["analyze", "table:2:9", "--alpha", "0.25"]);
    let mi: f64 = field(&out, "mi_bits").parse().unwrap();
    assert!((mi - 0.045_566).abs() < 1e-6);
    assert_eq!(field(&out, "W2"), "1");
    let err = run_from(["boolinfo", "analyze", "majority@n=4"]).unwrap_err();
    assert!(err.to_string().contains("odd"), "{err}");
    let err = run_from(["boolinfo", "analyze", "parity:1,x@n=4"]).unwrap_err();
    assert!(matches!(err, CliError::Spec { position: 9, .. }), "{err}");
}

#[test]
fn analyze_json_round_trips_function() {
    let (out, _) = run(&["analyze", "majority@n=5", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let spec = v["function"].as_str().unwrap();
    assert_eq!(parse_function_spec(spec).unwrap(), parse_function_spec("majority@n=5").unwrap());
    assert!(v["bounds"]["theorem1"].is_number());
}

#[test]
fn sweep_figure_data() {
    let (out, code) = run(&["sweep", "--grid", "101"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "alpha,conjectured,quadratic,theorem1");
    assert_eq!(lines.len(), 102);
    assert_eq!(*lines.last().unwrap(), "0.5,0,0,0");
    for line in &lines[1..] {
        let cells: Vec<&str> = line.split(',').collect();
        let alpha: f64 = cells[0].parse().unwrap();
        assert_eq!(cells[3].is_empty(), alpha < 0.211_324_9, "{line}");
    }
    let (out, _) = run(&["sweep", "--grid", "0.3333333333333333", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let row = &v[0];
    assert!((row["quadratic"].as_f64().unwrap() - 1.0 / 9.0).abs() < 1e-15);
    assert!((row["theorem1"].as_f64().unwrap() - 1.0 / 9.0).abs() < 1e-15);
}

#[test]
fn sweep_is_byte_identical_across_runs() {
    let args = ["sweep", "--grid", "37", "--column", "t3", "--column", "mi:majority@n=3"];
    assert_eq!(run(&args), run(&args));
}

#[test]
fn verify_exit_status_and_counts() {
    let (out, code) = run(&["verify", "conjecture", "--n", "3", "--scope", "all", "--grid", "21"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["checked_count"], 256 * 21);
    let (_, code) = run(&["verify", "corollary", "--n", "4"]);
    assert_eq!(code, 0);
    let (_, code) = run(&["verify", "moments", "--n", "3"]);
    assert_eq!(code, 0);
    let (out, code) = run(&["verify", "taylor"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["checked_count"], 2 * 2001 * 5);
    let (_, code) = run(&["verify", "hypercontractivity", "--samples", "200"]);
    assert_eq!(code, 0);
    let err = run_from(["boolinfo", "verify", "theorem1", "--n", "5", "--scope", "balanced"]).unwrap_err();
    assert!(err.to_string().contains("large"), "{err}");
}

#[test]
fn search_lists_maximizers() {
    let (out, _) = run(&["search", "--n", "2", "--grid", "0.25"]);
    let row = out.lines().nth(1).unwrap();
    let cells: Vec<&str> = row.split(',').collect();
    assert_eq!(cells[4], "4");
    for spec in cells[5].split(' ') {
        assert!(parse_function_spec(spec).unwrap().as_dictator().is_some());
    }
    let (out, _) = run(&["search", "--n", "6", "--samples", "50", "--seed", "9", "--grid", "0.3"]);
    assert_eq!(out.lines().count(), 2);
}

#[test]
fn moments_and_spectrum() {
    let (out, _) = run(&["moments", "majority@n=3", "--alpha", "0.25", "--k-max", "2"]);
    assert_eq!(out, "alpha,m2,m4,mi_bits\n0.25,0.19140625,0.06300354,0.147412844\n");
    let (out, _) = run(&["spectrum", "parity:1,2@n=3"]);
    assert_eq!(out, "mask,subset,level,coefficient\n3,\"{1,2}\",2,1\n");
}

#[test]
fn binary_writes_to_file_and_reports_errors() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.csv");
    let status = Command::new(env!("CARGO_BIN_EXE_boolinfo"))
        .args(["sweep", "--grid", "3", "--out"])
        .arg(&path)
        .status()
        .unwrap();
    assert!(status.success());
    assert!(std::fs::read_to_string(&path).unwrap().starts_with("alpha,"));
    let out = Command::new(env!("CARGO_BIN_EXE_boolinfo"))
        .args(["analyze", "majority@n=4"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("odd"));
}

#[test]
fn dimension_cap_comes_from_the_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_boolinfo"))
        .env("BOOLINFO_NMAX", "4")
        .args(["analyze", "dictator:1@n=5"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_boolinfo"))
        .env("BOOLINFO_NMAX", "4")
        .args(["analyze", "dictator:1@n=4"])
        .output()
        .unwrap();
    assert!(out.status.success());
}
