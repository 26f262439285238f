//! End-to-end runs of the binary.

use std::fs;
use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_tdpoly"))
}

fn write_tmp(name: &str, content: &str) -> PathBuf {
    let dir = std::env::temp_dir().join("tdpoly-cli-tests");
    fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    fs::write(&path, content).unwrap();
    path
}

#[test]
fn solve_reports_exact_optimum() {
    let graph = write_tmp("p3.el", "p 3 2\ne 1 2\ne 2 3\n");
    let out = bin()
        .args(["solve", "--problem", "is", "--l", "1"])
        .arg(&graph)
        .output()
        .unwrap();
    assert!(out.status.success(), "{out:?}");
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("optimum: 2"), "{stdout}");
    assert!(stdout.contains("solution: {1,3}"), "{stdout}");
}

#[test]
fn solve_infeasible_exits_with_check_failure() {
    let graph = write_tmp("p3b.el", "p 3 2\ne 1 2\ne 2 3\n");
    let out = bin()
        .args(["solve", "--problem", "is", "--l", "3"])
        .arg(&graph)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4), "{out:?}");
}

#[test]
fn malformed_graph_is_an_input_error() {
    let graph = write_tmp("bad.el", "p 2 1\ne 1 1\n");
    let out = bin().args(["decompose"]).arg(&graph).output().unwrap();
    assert_eq!(out.status.code(), Some(3), "{out:?}");
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("self-loop"), "{stderr}");
}

#[test]
fn emit_lp_is_deterministic() {
    let graph = write_tmp("c4.el", "p 4 4\ne 1 2\ne 2 3\ne 3 4\ne 1 4\n");
    let run = || {
        let out = bin()
            .args(["emit-lp", "--problem", "coloring", "--d", "3"])
            .arg(&graph)
            .output()
            .unwrap();
        assert!(out.status.success(), "{out:?}");
        String::from_utf8(out.stdout).unwrap()
    };
    let first = run();
    assert_eq!(first, run());
    assert!(first.starts_with("Maximize\n"), "{first}");
    assert!(first.contains("Subject To"), "{first}");
}

#[test]
fn cross_validate_c5_passes() {
    let graph = write_tmp("c5.el", "p 5 5\ne 1 2\ne 2 3\ne 3 4\ne 4 5\ne 1 5\n");
    let report = std::env::temp_dir().join("tdpoly-cli-tests/c5.json");
    let out = bin()
        .args(["cross-validate", "--problem", "hc", "--seed", "11"])
        .arg(&graph)
        .args(["--out"])
        .arg(&report)
        .output()
        .unwrap();
    assert!(out.status.success(), "{out:?}");
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("language has 1 terms"), "{stderr}");
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert!(json.as_array().unwrap().iter().all(|r| {
        matches!(
            r["status"].as_str().unwrap(),
            "pass" | "detected" | "not-detected"
        )
    }));
}

#[test]
fn decompose_accepts_supplied_td() {
    let graph = write_tmp("p3c.el", "p 3 2\ne 1 2\ne 2 3\n");
    let td = write_tmp("p3c.td", "s td 2 2 3\nb 1 1 2\nb 2 2 3\n1 2\n");
    let out = bin()
        .args(["decompose"])
        .arg(&graph)
        .args(["--td"])
        .arg(&td)
        .output()
        .unwrap();
    assert!(out.status.success(), "{out:?}");
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.starts_with("s ntd 9 2 3\n"), "{stdout}");
}
