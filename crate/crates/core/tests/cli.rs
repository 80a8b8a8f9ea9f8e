use std::path::PathBuf;
use std::process::{Command, Output};

use asym_containers::experiment::MANIFEST_NAME;

fn asymc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_asymc")).args(args).output().expect("asymc runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("asymc-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    dir
}

#[test]
fn enumerate_prints_known_count() {
    let out = asymc(&["enumerate", "--n", "4", "--m", "4"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).lines().any(|l| l == "4,4,12"));
}

#[test]
fn manifest_replays_identically() {
    let first = scratch("first");
    let out = asymc(&["sampler", "--n", "40", "--set", "trials=10", "--seed", "9", "--out", first.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let manifest = first.join(MANIFEST_NAME);
    let second = scratch("second");
    let out = asymc(&["--config", manifest.to_str().unwrap(), "--out", second.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let read = |d: &PathBuf| std::fs::read_to_string(d.join("sampler.csv")).unwrap();
    assert_eq!(read(&first), read(&second));
    let _ = std::fs::remove_dir_all(first);
    let _ = std::fs::remove_dir_all(second);
}

#[test]
fn errors_map_to_exit_codes() {
    assert_eq!(asymc(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(asymc(&["count-split", "--n", "10", "--m", "5", "--set", "bogus=1"]).status.code(), Some(2));
    assert_eq!(asymc(&["enumerate", "--n", "9", "--m", "3"]).status.code(), Some(4));
}

#[test]
fn tree_reports_total_coverage() {
    let out = asymc(&["tree", "--n", "6", "--m", "7"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let dir = scratch("tree");
    let out = asymc(&["tree", "--n", "6", "--m", "7", "--out", dir.to_str().unwrap()]);
    assert!(out.status.success());
    let cov = std::fs::read_to_string(dir.join("coverage.txt")).unwrap();
    assert!(cov.contains("covered=TOTAL"), "{cov}");
    let _ = std::fs::remove_dir_all(dir);
}
