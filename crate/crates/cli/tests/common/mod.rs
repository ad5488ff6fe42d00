#![allow(dead_code)]

use std::path::PathBuf;
use std::process::{Command, Output};

pub fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

pub fn thetalab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_thetalab"))
        .args(args)
        .current_dir(root())
        .env_remove("THETALAB_CONFIG")
        .output()
        .expect("binary runs")
}

pub fn stdout(args: &[&str]) -> String {
    let out = thetalab(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

pub const GOLDENS: &[(&str, &[&str])] = &[
    ("coeffs_delta.csv", &["--instance", "delta", "coeffs", "--n", "30"]),
    ("eval_grid_zeta.csv", &["--instance", "zeta", "eval-grid", "--t-start", "0", "--t-end", "30", "--steps", "30"]),
    ("mollifier_chi5.csv", &["--instance", "chi_5_1", "mollifier", "--t", "14", "--y-max", "50", "--points", "20"]),
    ("moment_mollified.csv", &["--instance", "zeta", "moment", "--kind", "mollified", "--T1", "0", "--T2", "30", "--y", "10"]),
    (
        "theorem_all_t.json",
        &["--instance", "zeta", "theorem", "--id", "all-T", "--sigma", "0.51", "--theta", "1", "--grid", "10,20,40"],
    ),
    ("theorem_rh.json", &["--instance", "zeta", "theorem", "--id", "rh", "--theta", "1", "--epsilons", "1,0.5", "--grid", "10,20"]),
    ("zeros_zeta.json", &["--instance", "zeta", "zeros", "--rect", "0.01", "0.99", "0", "50"]),
    (
        "family_chi5.json",
        &["family", "--spec", "tests/data/chi5.toml", "--sigma", "0.6", "--theta", "1", "--grid", "10,20"],
    ),
    ("verify.json", &["verify"]),
];

/// Runs every golden twice; returns the names that differ between runs or
/// from the stored file.
pub fn golden_failures() -> Vec<String> {
    let mut bad = Vec::new();
    for (name, args) in GOLDENS {
        let first = stdout(args);
        let second = stdout(args);
        let stored = std::fs::read_to_string(root().join("tests/golden").join(name)).unwrap_or_default();
        if first != second || first != stored {
            bad.push(name.to_string());
        }
    }
    bad
}
