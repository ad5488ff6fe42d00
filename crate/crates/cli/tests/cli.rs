mod common;

use common::{root, stdout, thetalab, GOLDENS};
use serde_json::Value;
use std::process::Command;


#[test]
fn goldens_rerun_diff_clean() {
    if std::env::var_os("THETALAB_BLESS").is_some() {
        for (name, args) in GOLDENS {
            std::fs::write(root().join("tests/golden").join(name), stdout(args)).unwrap();
        }
    }
    let failures = common::golden_failures();
    assert!(failures.is_empty(), "{failures:?}");
}

#[test]
fn minimal_moment_flags() {
    let out = stdout(&["moment", "--instance", "zeta", "--kind", "second", "--T1", "0", "--T2", "100"]);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("kind,T1,T2,y_or_X,value,error,seconds"));
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row[0], "second");
    let v: f64 = row[4].parse().unwrap();
    assert!((v / 292.2 - 1.0).abs() < 0.05);
}

#[test]
fn unknown_key_rejected_with_status_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "thetaa = 0.3\n").unwrap();
    let out = thetalab(&["--config", cfg.to_str().unwrap(), "verify"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("thetaa"));

    std::fs::write(&cfg, "riemann_siegel = true\n").unwrap();
    assert_eq!(thetalab(&["--config", cfg.to_str().unwrap(), "verify"]).status.code(), Some(2));
    assert_eq!(thetalab(&["--instance", "nope", "coeffs", "--n", "3"]).status.code(), Some(2));
    assert_eq!(thetalab(&["--instance", "zeta", "moment", "--kind", "second", "--T1", "0"]).status.code(), Some(2));
}

#[test]
fn config_file_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_thetalab"))
        .args(["coeffs", "--n", "4"])
        .current_dir(root())
        .env("THETALAB_CONFIG", "tests/data/run.toml")
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let row4: Vec<&str> = text.lines().nth(4).unwrap().split(',').collect();
    assert_eq!(row4[0], "4");
    assert_eq!(row4[1].parse::<f64>().unwrap(), -0.71875);
}

#[test]
fn numeric_failure_reports_manifest() {
    let res = thetalab(&["--instance", "zeta", "eval-grid", "--sigma", "1", "--t-start", "0", "--t-end", "0", "--steps", "0"]);
    assert_eq!(res.status.code(), Some(1));
    let manifest: Value = serde_json::from_slice(&res.stderr).unwrap();
    assert_eq!(manifest["status"], "numeric-failure");
}

#[test]
fn outputs_and_plot_data_to_files() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("r.json");
    let plot = dir.path().join("p.txt");
    stdout(&[
        "--instance",
        "zeta",
        "--output",
        report.to_str().unwrap(),
        "--plot-data",
        plot.to_str().unwrap(),
        "theorem",
        "--id",
        "all-T",
        "--sigma",
        "0.6",
        "--theta",
        "0.5",
        "--grid",
        "4,8,16,32",
    ]);
    let xs: Vec<f64> = std::fs::read_to_string(&plot)
        .unwrap()
        .lines()
        .map(|l| l.split(' ').next().unwrap().parse().unwrap())
        .collect();
    assert_eq!(xs.len(), 4);
    assert!(xs.windows(2).all(|w| w[1] > w[0]));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    validate(&schema(), &v, "$");
}

fn schema() -> Value {
    serde_json::from_str(&std::fs::read_to_string(root().join("schema/theorem_report.schema.json")).unwrap()).unwrap()
}

fn type_matches(ty: &str, v: &Value) -> bool {
    match ty {
        "object" => v.is_object(),
        "array" => v.is_array(),
        "string" => v.is_string(),
        "number" => v.is_number(),
        "boolean" => v.is_boolean(),
        "null" => v.is_null(),
        _ => false,
    }
}

/// The subset of JSON Schema used by the shipped schema.
fn validate(schema: &Value, v: &Value, at: &str) {
    match &schema["type"] {
        Value::String(t) => assert!(type_matches(t, v), "{at}: expected {t}"),
        Value::Array(ts) => assert!(ts.iter().any(|t| type_matches(t.as_str().unwrap(), v)), "{at}: type"),
        _ => {}
    }
    if let Some(options) = schema["enum"].as_array() {
        assert!(options.contains(v), "{at}: {v} not in enum");
    }
    if let Some(required) = schema["required"].as_array() {
        for key in required {
            assert!(v.get(key.as_str().unwrap()).is_some(), "{at}: missing {key}");
        }
    }
    if let (Some(props), Some(obj)) = (schema["properties"].as_object(), v.as_object()) {
        for (key, value) in obj {
            match props.get(key) {
                Some(sub) => validate(sub, value, &format!("{at}.{key}")),
                None => match &schema["additionalProperties"] {
                    Value::Bool(false) => panic!("{at}: unexpected key {key}"),
                    Value::Object(_) => validate(&schema["additionalProperties"], value, &format!("{at}.{key}")),
                    _ => {}
                },
            }
        }
    } else if let (Value::Object(_), Some(obj)) = (&schema["additionalProperties"], v.as_object()) {
        for (key, value) in obj {
            validate(&schema["additionalProperties"], value, &format!("{at}.{key}"));
        }
    }
    if let (Some(items), Some(arr)) = (schema.get("items"), v.as_array()) {
        for (i, item) in arr.iter().enumerate() {
            validate(items, item, &format!("{at}[{i}]"));
        }
    }
}

#[test]
fn reports_validate_against_schema() {
    let s = schema();
    for (name, _) in GOLDENS.iter().filter(|(n, _)| n.starts_with("theorem") || n.starts_with("family")) {
        let text = std::fs::read_to_string(root().join("tests/golden").join(name)).unwrap();
        validate(&s, &serde_json::from_str(&text).unwrap(), name);
    }
    let local = stdout(&[
        "--instance", "zeta", "theorem", "--id", "local", "--sigma", "0.6", "--theta", "1", "--epsilon", "0.1", "--T1", "0",
        "--T2", "12", "--beta", "0.8", "--gamma", "6",
    ]);
    let v: Value = serde_json::from_str(&local).unwrap();
    validate(&s, &v, "local");
    assert_eq!(v["chain"].as_array().unwrap().len(), 1);
}

#[test]
fn zero_statistic_for_characters_mod_five() {
    let out = stdout(&["family", "--spec", "tests/data/chi5.toml", "--sigma", "0.9", "--count-zeros", "--T", "30"]);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["count"], 0);
}
