#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

pub fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

pub struct Run {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

pub fn toric(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_toric"))
        .args(args)
        .env_remove("TORIC_MAX_DIM")
        .output()
        .expect("binary runs");
    Run {
        stdout: String::from_utf8(out.stdout).expect("utf-8 stdout"),
        stderr: String::from_utf8(out.stderr).expect("utf-8 stderr"),
        code: out.status.code().expect("exit code"),
    }
}

pub fn fixture(name: &str) -> String {
    fixtures().join(format!("{name}.json")).display().to_string()
}

pub fn points(name: &str) -> String {
    fixtures().join(format!("{name}.points.json")).display().to_string()
}

pub fn result(run: &Run) -> serde_json::Value {
    let doc: serde_json::Value = serde_json::from_str(&run.stdout).expect("json report");
    doc["result"].clone()
}

/// Every golden case: name, arguments, expected exit code.
pub fn cases() -> Vec<(String, Vec<String>, i32)> {
    let all = [
        "f1", "f2", "f3", "f4", "f5", "slab", "lens_cone", "f5_lift_cone", "half_space_3d", "half_line",
    ];
    let failing = ["f5", "f5_lift_cone"];
    let mut out = Vec::new();
    for name in all {
        let code = if failing.contains(&name) { 3 } else { 0 };
        out.push((format!("{name}.validate"), vec!["validate".into(), fixture(name)], code));
        out.push((format!("{name}.classify"), vec!["classify".into(), fixture(name)], code));
        out.push((format!("{name}.cut"), vec!["cut".into(), fixture(name)], 0));
    }
    let targets = [
        ("f1", "0.5"),
        ("f2", "0.1,0.2"),
        ("f3", "1,-1"),
        ("f4", "0,0"),
        ("f5", "0,0"),
        ("slab", "0.5,2"),
        ("lens_cone", "1,1"),
        ("half_line", "-3"),
    ];
    for (name, target) in targets {
        out.push((format!("{name}.potential"), vec!["potential".into(), fixture(name), "--points".into(), points(name)], 0));
        out.push((format!("{name}.metric"), vec!["metric".into(), fixture(name), "--points".into(), points(name)], 0));
        out.push((format!("{name}.invert"), vec!["invert".into(), fixture(name), format!("--target={target}")], 0));
    }
    out.push((
        "f2.potential_grid".into(),
        vec!["potential".into(), fixture("f2"), "--grid".into(), "0.1:0.7:3".into(), "--grid".into(), "0.1:0.7:3".into()],
        0,
    ));
    out.push((
        "f1.cut_ambient".into(),
        vec![
            "cut".into(),
            fixture("f1"),
            "--ambient".into(),
            r#"{"x":[0.5],"theta":[1.0],"z":[[0.7071067811865476,0.0],[0.0,0.7071067811865476]]}"#.into(),
        ],
        0,
    ));
    out
}

/// Runs every golden case twice; returns the failures. With `update` set
/// the golden files are rewritten instead of compared.
pub fn check_golden(update: bool) -> Vec<String> {
    let mut failures = Vec::new();
    for (name, args, code) in cases() {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let first = toric(&args);
        let second = toric(&args);
        if first.code != code {
            failures.push(format!("{name}: exit {} (expected {code}): {}", first.code, first.stderr.trim()));
        }
        if first.stdout != second.stdout {
            failures.push(format!("{name}: output differs between runs"));
        }
        // paths vary between checkouts; reports never echo them
        if first.stdout.contains(env!("CARGO_MANIFEST_DIR")) {
            failures.push(format!("{name}: output leaks an input path"));
        }
        let path = golden_dir().join(format!("{name}.out"));
        if update {
            std::fs::write(&path, &first.stdout).expect("writable golden dir");
        } else {
            match std::fs::read_to_string(&path) {
                Ok(expected) if expected == first.stdout => {}
                Ok(_) => failures.push(format!("{name}: differs from golden file")),
                Err(_) => failures.push(format!("{name}: missing golden file {}", path.display())),
            }
        }
    }
    failures
}
