//! Drives the compiled binary against the fixture corpus. Shared by the
//! golden and acceptance targets, which each use a different subset.
#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

/// One golden report per subcommand (several get more than one to cover
/// flag combinations). File names double as the test inventory.
pub const CASES: &[(&str, &[&str])] = &[
    ("analyze_basic.json", &["analyze", "basic.form"]),
    ("analyze_basic.txt", &["analyze", "basic.form", "--format", "text"]),
    (
        "analyze_metric.json",
        &["analyze", "metric.form", "--metric", "g"],
    ),
    ("analyze_map.json", &["analyze", "maps.form", "--map", "curve"]),
    ("d_basic.json", &["d", "basic.form"]),
    ("wedge_basic.json", &["wedge", "basic.form", "w", "closed"]),
    ("star_default.json", &["star", "metric.form"]),
    ("star_metric.json", &["star", "metric.form", "--metric", "g"]),
    (
        "delta_radial.json",
        &["delta", "metric.form", "--form", "radial", "--metric", "g"],
    ),
    ("laplace_metric.json", &["laplace", "metric.form", "--metric", "g"]),
    (
        "commutator_basic.json",
        &["commutator", "basic.form", "--form", "w", "--form", "closed"],
    ),
    ("pullback_curve.json", &["pullback", "maps.form", "--map", "curve"]),
    ("witness_basic.json", &["witness", "basic.form"]),
    ("evolve_torsion.json", &["evolve", "torsion.form", "--torsion", "T"]),
    (
        "relation_torsion.json",
        &["relation", "torsion.form", "--form", "b", "--torsion", "T"],
    ),
    ("factor_default.json", &["factor", "factor.form"]),
    (
        "descent_curve.json",
        &["descent", "maps.form", "--form", "closed", "--map", "curve"],
    ),
    ("jacobian_fold.json", &["jacobian", "maps.form", "--map", "fold"]),
    (
        "poisson_pair.json",
        &["poisson", "poisson.form", "h", "angular", "--pairs", "q:p"],
    ),
    ("maxwell_wave.json", &["maxwell", "maxwell.form"]),
    ("hamilton_both.json", &["hamilton", "hamilton.form"]),
    ("thermo_ideal.json", &["thermo", "--cv", "3/2", "--R", "1"]),
    (
        "thermo_ideal.txt",
        &["thermo", "--cv", "3/2", "--R", "1", "--format", "text"],
    ),
    ("table.json", &["table"]),
    ("table.txt", &["table", "--format", "text"]),
];

pub fn fixtures_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

/// Runs `exform` with the fixture directory as working directory and a
/// scrubbed environment, so reports depend only on the arguments.
pub fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_exform"))
        .args(args)
        .current_dir(fixtures_dir())
        .env_remove("EXFORM_EXPONENT_BOUND")
        .output()
        .expect("the exform binary runs")
}

pub fn run_with_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_exform"))
        .args(args)
        .current_dir(fixtures_dir())
        .env(key, value)
        .output()
        .expect("the exform binary runs")
}

/// Zeroes the timing field, the one nondeterministic byte range in a
/// report; everything else must match the golden file byte for byte.
pub fn normalize(stdout: &[u8]) -> String {
    let text = String::from_utf8(stdout.to_vec()).expect("reports are utf-8");
    let mut out = String::new();
    for line in text.lines() {
        if let Some(idx) = line.find("\"timing_ms\":") {
            out.push_str(&line[..idx]);
            out.push_str("\"timing_ms\": 0");
        } else if line.starts_with("timing:") && line.ends_with("ms") {
            out.push_str("timing: 0 ms");
        } else {
            out.push_str(line);
        }
        out.push('\n');
    }
    out
}

pub fn assert_golden(name: &str, stdout: &[u8]) {
    let path = golden_dir().join(name);
    let actual = normalize(stdout);
    if std::env::var("UPDATE_GOLDEN").is_ok() {
        std::fs::write(&path, &actual).expect("golden file is writable");
    }
    let expected = std::fs::read_to_string(&path)
        .unwrap_or_else(|_| panic!("missing golden file {name}; regenerate with UPDATE_GOLDEN=1"));
    assert_eq!(actual, expected, "golden mismatch for {name}");
}
