//! End-to-end runs of the `coext` binary: output shapes and the exit-code
//! contract (0 success, 1 verification failure, 2 usage or parse error).

use std::path::{Path, PathBuf};
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_coext"))
}

fn spec(name: &str) -> PathBuf {
    Path::new(concat!(env!("CARGO_MANIFEST_DIR"), "/../../specs")).join(name)
}

fn tmp(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn eval_prints_fifteen_digits() {
    let out = bin()
        .args(["eval"])
        .arg(spec("odot3.spec"))
        .args(["0.2", "0.9"])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout), "0.166666666666667\n");
}

#[test]
fn verify_odot1_exits_zero() {
    let out = bin()
        .args(["verify"])
        .arg(spec("odot1.spec"))
        .args(["--n", "101", "--tol", "1e-9"])
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(
        text.lines().filter(|l| l.starts_with("PASS")).count(),
        5,
        "{text}"
    );
}

#[test]
fn verify_writes_a_csv_report() {
    let report = tmp("verify-odot4.csv");
    let out = bin()
        .args(["verify"])
        .arg(spec("odot4.spec"))
        .args(["--n", "51", "--out"])
        .arg(&report)
        .output()
        .unwrap();
    assert!(out.status.success());
    let csv = std::fs::read_to_string(&report).unwrap();
    assert!(csv.starts_with("check,max_deviation,samples,witness\n"));
    assert_eq!(csv.lines().count(), 6, "{csv}");
}

#[test]
fn enumerate_two_chain_prints_one_table() {
    let out = bin().args(["enumerate", "--n", "2"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.starts_with("1 tomonoid(s) on the 2-chain"), "{text}");
}

#[test]
fn enumerate_guards_against_large_chains() {
    let out = bin().args(["enumerate", "--n", "12"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn check_flags_a_broken_table_with_exit_one() {
    let path = tmp("broken.spec");
    std::fs::write(&path, "tomonoid 3\n0 0 0\n0 0 2\n0 1 2\n").unwrap();
    let out = bin().args(["check"]).arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("violated"), "{err}");
}

#[test]
fn check_accepts_a_valid_table() {
    let path = tmp("l3.spec");
    std::fs::write(&path, "tomonoid 3\n0 0 0\n0 0 1\n0 1 2\n").unwrap();
    let out = bin().args(["check"]).arg(&path).output().unwrap();
    assert!(out.status.success());
}

#[test]
fn parse_errors_exit_two_with_a_position() {
    let path = tmp("bad.spec");
    std::fs::write(&path, "tomonoid 2\n0 0\n0 oops\n").unwrap();
    let out = bin().args(["check"]).arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
}

#[test]
fn build_rejects_odot2_with_exit_one() {
    let out = bin()
        .args(["build"])
        .arg(spec("odot2.spec"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("impossible under a Łukasiewicz filter"));
}

#[test]
fn oracle_compare_matches_the_shipped_constructions() {
    for (file, oracle) in [
        ("odot1.spec", "odot1"),
        ("odot3.spec", "odot3"),
        ("odot4.spec", "odot4"),
    ] {
        let out = bin()
            .args(["oracle-compare"])
            .arg(spec(file))
            .args(["--oracle", oracle, "--n", "201"])
            .output()
            .unwrap();
        assert!(out.status.success());
        let text = String::from_utf8_lossy(&out.stdout);
        let dev: f64 = text
            .split("max deviation ")
            .nth(1)
            .and_then(|s| s.split(' ').next())
            .unwrap()
            .parse()
            .unwrap();
        assert!(dev <= 1e-12, "{file}: {text}");
    }
}

#[test]
fn unknown_oracle_exits_two() {
    let out = bin()
        .args(["oracle-compare"])
        .arg(spec("odot1.spec"))
        .args(["--oracle", "odot9"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn grid_emits_csv() {
    let path = tmp("grid.csv");
    let out = bin()
        .args(["grid"])
        .arg(spec("odot1.spec"))
        .args(["--n", "11", "--out"])
        .arg(&path)
        .output()
        .unwrap();
    assert!(out.status.success());
    let csv = std::fs::read_to_string(&path).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("a,b,value"));
    assert!(lines.next().unwrap().split(',').count() == 3);
}

#[test]
fn filters_lists_quotients() {
    let path = tmp("l5.spec");
    std::fs::write(
        &path,
        "tomonoid 5\n0 0 0 0 0\n0 0 0 0 1\n0 0 0 1 2\n0 0 1 2 3\n0 1 2 3 4\n",
    )
    .unwrap();
    let out = bin().args(["filters"]).arg(&path).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.starts_with("2 filter(s)"), "{text}");
    assert!(text.contains("filter [4, 4]"));
    assert!(text.contains("filter [0, 4]"));
}

#[test]
fn recover_prints_the_quotient_table() {
    let out = bin()
        .args(["recover"])
        .arg(spec("odot1.spec"))
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(
        text.contains("recovered quotient on 3 element(s):"),
        "{text}"
    );
    assert!(text.contains("0 0 1"), "{text}");
}

#[test]
fn missing_file_exits_two() {
    let out = bin()
        .args(["eval", "/nonexistent.spec", "0.5", "0.5"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
