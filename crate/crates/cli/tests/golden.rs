//! Golden reports and workspace round trips over the corpus in `tests/golden`.

mod support;

use std::fs;

use shriek_cli::workspace::Workspace;
use support::*;

#[test]
fn reports_match_golden_files() {
    let failures: Vec<String> = cases().iter().filter_map(|c| check_case(c).err()).collect();
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}

#[test]
fn every_case_has_a_golden_file_and_vice_versa() {
    let names: Vec<String> = cases().into_iter().map(|c| c.name).collect();
    for e in fs::read_dir(golden_dir()).unwrap() {
        let p = e.unwrap().path();
        if p.extension().is_some_and(|x| x == "json") {
            let stem = p.file_stem().unwrap().to_string_lossy().to_string();
            assert!(names.contains(&stem), "stale golden file {}", p.display());
        }
    }
}

#[test]
fn workspaces_round_trip() {
    for path in workspaces() {
        let text = fs::read_to_string(&path).unwrap();
        let name = path.file_name().unwrap().to_string_lossy();
        match Workspace::parse(&text) {
            Ok(ws) => {
                assert!(!name.starts_with("bad_"), "{name} should not parse");
                let printed = ws.print();
                let again = Workspace::parse(&printed).unwrap();
                assert_eq!(ws, again, "{name}");
                assert_eq!(printed, again.print(), "{name}");
            }
            Err(e) => assert!(name.starts_with("bad_"), "{name}: {e}"),
        }
    }
}

#[test]
fn reports_are_byte_deterministic() {
    for case in cases().iter().filter(|c| c.name.starts_with("dualizing_cusp") || c.name == "verify_kunneth") {
        let (a, b) = (run_case(case), run_case(case));
        assert_eq!(a.stdout, b.stdout, "{}", case.name);
    }
}

#[test]
fn seed_check_passes_with_a_cache() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("gb.json");
    let cache = cache.to_str().unwrap();
    for _ in 0..2 {
        let run = shriek(&["-w", "rings.shr", "--cache", cache, "--seed-check", "groebner", "I"]);
        assert_eq!(run.code, 0, "{}", run.stdout);
        let v: serde_json::Value = serde_json::from_str(&run.stdout).unwrap();
        assert_eq!(v["seed_check"]["identical"], true);
        assert_eq!(v["seed_check"]["cache_mismatches"], serde_json::json!([]));
    }
    let text = fs::read_to_string(dir.path().join("gb.json")).unwrap();
    fs::write(dir.path().join("gb.json"), &text[..text.len() / 3]).unwrap();
    let run = shriek(&["-w", "rings.shr", "--cache", cache, "groebner", "I"]);
    assert_eq!(run.code, 0);
    assert!(run.stderr.contains("CorruptCache"), "{}", run.stderr);
}

#[test]
fn usage_errors_exit_with_failure() {
    assert_eq!(shriek(&["-w", "rings.shr", "frobnicate"]).code, 3);
    assert_eq!(shriek(&["-w", "rings.shr", "--window", "3:1", "print"]).code, 3);
    assert_eq!(shriek(&["-w", "missing.shr", "print"]).code, 3);
    assert_eq!(shriek(&["--help"]).code, 0);
}

#[test]
fn json_flag_writes_the_report_to_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let run = shriek(&["-w", "rings.shr", "--no-timing", "--json", out.to_str().unwrap(), "resolve", "T"]);
    assert_eq!(run.code, 0);
    assert!(run.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(v["results"]["betti_numbers"], serde_json::json!([1, 2, 1]));
}
