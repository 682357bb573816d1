// SPDX-License-Identifier: Apache-2.0

use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::sync::OnceLock;

fn rev4(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rev4"))
        .args(args)
        .env_remove("REV4_TABLE")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

/// A k = 4 table shared by the tests in this file.
fn table() -> &'static Path {
    static PATH: OnceLock<PathBuf> = OnceLock::new();
    PATH.get_or_init(|| {
        let path = Path::new(env!("CARGO_TARGET_TMPDIR")).join("cli-k4.orc");
        let out = rev4(&["build", "--k", "4", "--out", path.to_str().unwrap()]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        path
    })
}

#[test]
fn build_prints_counts() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("k3.orc");
    let out = rev4(&["build", "--k", "3", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "size\treduced\tfunctions\n0\t1\t1\n1\t4\t32\n2\t33\t784\n3\t425\t16204\n");
}

#[test]
fn stats_matches_build() {
    let out = rev4(&["stats", "--table", table().to_str().unwrap()]);
    assert!(out.status.success());
    assert!(stdout(&out).ends_with("4\t6538\t294507\n"));
}

#[test]
fn synth_identity() {
    let out = rev4(&["synth", "--table", table().to_str().unwrap(), "--perm", "0,1,2,3,4,5,6,7,8,9,10,11,12,13,14,15"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("# k = 4 m = 4 L = 8\n"));
    assert!(text.contains("size 0\n"));
    assert!(text.contains("circuit \n"));
}

#[test]
fn synth_shift4_both_input_forms() {
    for perm in ["1,2,3,4,5,6,7,8,9,10,11,12,13,14,15,0", "[1,2,3,4,5,6,7,8,9,10,11,12,13,14,15,0]"] {
        let out = rev4(&["synth", "--table", table().to_str().unwrap(), "--perm", perm]);
        assert!(out.status.success());
        let text = stdout(&out);
        assert!(text.contains("size 4\n"), "{text}");
    }
}

#[test]
fn synth_circuit_is_resynthesized() {
    let out = Command::new(env!("CARGO_BIN_EXE_rev4"))
        .args(["synth", "--circuit", "CNOT(a,b) CNOT(b,a) CNOT(a,b) CNOT(a,b)"])
        .env("REV4_TABLE", table())
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.contains("input 4 gates\n"));
    assert!(text.contains("size 2\n"), "{text}");
}

#[test]
fn exit_codes() {
    let t = table().to_str().unwrap();
    // 4_49 needs 12 gates, more than L = 6
    let exceeds = rev4(&["synth", "--table", t, "--m", "2", "--perm", "[15,1,12,3,5,6,8,7,0,10,13,9,2,4,14,11]"]);
    assert_eq!(exceeds.status.code(), Some(3));
    let bad_perm = rev4(&["synth", "--table", t, "--perm", "0,0,1,2,3,4,5,6,7,8,9,10,11,12,13,14"]);
    assert_eq!(bad_perm.status.code(), Some(2));
    let bad_circuit = rev4(&["synth", "--table", t, "--circuit", "SWAP(a,b)"]);
    assert_eq!(bad_circuit.status.code(), Some(2));
    let too_deep = rev4(&["synth", "--table", t, "--m", "5", "--perm", "0,1,2,3,4,5,6,7,8,9,10,11,12,13,14,15"]);
    assert_eq!(too_deep.status.code(), Some(2));
    let missing = rev4(&["synth", "--perm", "0,1,2,3,4,5,6,7,8,9,10,11,12,13,14,15"]);
    assert_eq!(missing.status.code(), Some(2));
    let conflict = rev4(&["synth", "--table", t, "--perm", "0", "--circuit", "NOT(a)"]);
    assert_eq!(conflict.status.code(), Some(2));
    let no_file = rev4(&["stats", "--table", "/nonexistent/table.orc"]);
    assert_eq!(no_file.status.code(), Some(4));
}

#[test]
fn corrupt_table_fails_with_checksum_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.orc");
    let mut bytes = std::fs::read(table()).unwrap();
    let mid = bytes.len() / 2;
    bytes[mid] ^= 1;
    std::fs::write(&path, bytes).unwrap();
    let out = rev4(&["stats", "--table", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("checksum"));
}

#[test]
fn random_is_reproducible_tsv() {
    let t = table().to_str().unwrap();
    let a = rev4(&["random", "--table", t, "--samples", "200", "--seed", "5"]);
    let b = rev4(&["random", "--table", t, "--samples", "200", "--seed", "5", "--threads", "3"]);
    assert!(a.status.success());
    assert_eq!(stdout(&a), stdout(&b));
    let total: u64 = stdout(&a)
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split('\t').nth(1).unwrap().parse::<u64>().unwrap())
        .sum();
    assert_eq!(total, 200);
}

#[test]
fn hard_reports_best_size() {
    let t = table().to_str().unwrap();
    let out = rev4(&["hard", "--table", t, "--m", "2", "--from-identity", "--evaluations", "2000"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("best size "));
}
