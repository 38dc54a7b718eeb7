//! Golden corpus: case list, binary runner and comparison.

#![allow(dead_code)]

use std::fs;
use std::path::PathBuf;
use std::process::Command;

pub fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden")
}

#[derive(Clone, Debug)]
pub struct Case {
    pub name: String,
    pub workspace: String,
    pub args: Vec<String>,
}

pub fn cases() -> Vec<Case> {
    let text = fs::read_to_string(golden_dir().join("cases.txt")).expect("cases.txt");
    text.lines()
        .filter(|l| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|l| {
            let parts: Vec<&str> = l.split('|').map(str::trim).collect();
            assert_eq!(parts.len(), 3, "bad case line `{l}`");
            Case {
                name: parts[0].to_string(),
                workspace: parts[1].to_string(),
                args: parts[2].split_whitespace().map(String::from).collect(),
            }
        })
        .collect()
}

/// The workspaces of the corpus that are expected to parse.
pub fn workspaces() -> Vec<PathBuf> {
    let mut v: Vec<PathBuf> = fs::read_dir(golden_dir())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "shr"))
        .collect();
    v.sort();
    v
}

pub struct Run {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

pub fn shriek(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_shriek"))
        .args(args)
        .current_dir(golden_dir())
        .env_remove("SHRIEK_CACHE")
        .output()
        .expect("run shriek");
    Run {
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
        code: out.status.code().unwrap_or(-1),
    }
}

pub fn run_case(case: &Case) -> Run {
    let mut args = vec!["-w", case.workspace.as_str(), "--no-timing"];
    args.extend(case.args.iter().map(String::as_str));
    shriek(&args)
}

pub fn expected_code(status: &str) -> i32 {
    match status {
        "verified" | "success" => 0,
        "invariant-verified" => 2,
        "refuted" | "failed" | "error" | "seed-check-failed" => 3,
        "inconclusive" | "not-stabilized" => 4,
        other => panic!("unknown status {other}"),
    }
}

/// Compares a case against its golden file (rewriting it under `UPDATE_GOLDEN=1`) and checks
/// the exit code against the report.
pub fn check_case(case: &Case) -> Result<serde_json::Value, String> {
    let run = run_case(case);
    let report: serde_json::Value =
        serde_json::from_str(&run.stdout).map_err(|e| format!("{}: output is not JSON: {e}", case.name))?;
    let status = report["status"].as_str().unwrap_or_default();
    if report["exit_code"] != serde_json::json!(run.code) || expected_code(status) != run.code {
        return Err(format!("{}: status {status} with exit code {} (report says {})", case.name, run.code, report["exit_code"]));
    }
    let path = golden_dir().join(format!("{}.json", case.name));
    if std::env::var_os("UPDATE_GOLDEN").is_some_and(|v| v == "1") {
        fs::write(&path, &run.stdout).unwrap();
        return Ok(report);
    }
    let expected = fs::read_to_string(&path).map_err(|e| format!("{}: {e} (run with UPDATE_GOLDEN=1)", case.name))?;
    if expected != run.stdout {
        return Err(format!("{}: output differs from {}", case.name, path.display()));
    }
    Ok(report)
}
