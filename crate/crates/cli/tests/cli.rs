use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn laminar(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_laminar"))
        .args(args)
        .current_dir(dir)
        .env_remove("LAMINAR_CACHE")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("bad JSON ({e}): {}", stdout(o)))
}

#[test]
fn obf_small_values() {
    let dir = tempfile::tempdir().unwrap();
    let o = laminar(dir.path(), &["obf", "--N", "4", "--no-cache", "--json"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["obf_N"], "8/1");
    assert_eq!(v["ratio"], "4/3");
    assert_eq!(v["tail"], "1/2");
    assert_eq!(v["critical"], serde_json::json!([1, 2, 3]));

    let o = laminar(dir.path(), &["obf", "--N", "2", "--no-cache", "--json"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["obf_N"], "1/1");

    let o = laminar(dir.path(), &["obf", "--N", "1", "--no-cache"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn obf_cache_is_idempotent_and_resumable() {
    let dir = tempfile::tempdir().unwrap();
    let o = laminar(dir.path(), &["obf", "--N", "200", "--cache", "c.tsv"]);
    assert_eq!(code(&o), 0);
    let first = fs::read_to_string(dir.path().join("c.tsv")).unwrap();
    assert_eq!(first.lines().count(), 199);

    let o = laminar(dir.path(), &["obf", "--N", "150", "--cache", "c.tsv"]);
    assert_eq!(code(&o), 0);
    assert_eq!(fs::read_to_string(dir.path().join("c.tsv")).unwrap(), first);

    let o = laminar(dir.path(), &["obf", "--N", "260", "--cache", "c.tsv", "--json"]);
    let resumed = json(&o)["obf_N"].clone();
    let fresh = laminar(dir.path(), &["obf", "--N", "260", "--no-cache", "--json"]);
    assert_eq!(resumed, json(&fresh)["obf_N"]);
    let after = fs::read_to_string(dir.path().join("c.tsv")).unwrap();
    assert!(after.starts_with(&first));
    assert_eq!(after.lines().count(), 259);
}

#[test]
fn corrupt_cache_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    laminar(dir.path(), &["obf", "--N", "120", "--cache", "c.tsv"]);
    let path = dir.path().join("c.tsv");
    let src = fs::read_to_string(&path).unwrap();
    let bad = src.replacen("\n101\t", "\n101\t1", 1);
    assert_ne!(bad, src);
    fs::write(&path, bad).unwrap();
    let o = laminar(dir.path(), &["obf", "--N", "130", "--cache", "c.tsv"]);
    assert_eq!(code(&o), 4);
    assert!(String::from_utf8_lossy(&o.stderr).contains("101"));
}

#[test]
fn fano_tower_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let o = laminar(dir.path(), &["construct", "fano-tower", "--r", "0", "-o", "f.txt", "--json"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["report"]["count_geq_t"], 29);
    assert_eq!(v["sets"], 29);

    let o = laminar(dir.path(), &["verify", "f.txt"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));

    let o = laminar(dir.path(), &["construct", "fano-tower", "--r", "1", "-o", "f1.json", "--json"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["report"]["count_geq_t"], 1625);
    let o = laminar(dir.path(), &["verify", "f1.json", "--json"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["laminar"], true);
}

#[test]
fn large_tower_needs_opt_in() {
    let dir = tempfile::tempdir().unwrap();
    let o = laminar(dir.path(), &["construct", "fano-tower", "--r", "2"]);
    assert_eq!(code(&o), 3);
    let o = laminar(dir.path(), &["construct", "fano-tower", "--r", "2", "--counts-only", "--json"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["report"]["count_geq_t"], 3981251);
}

#[test]
fn circle_geometry_and_bad_orders() {
    let dir = tempfile::tempdir().unwrap();
    let o = laminar(dir.path(), &["construct", "circle", "--q", "3", "-o", "c.txt", "--json"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["blocks"], 30);
    assert_eq!(v["v"], 10);
    assert_eq!(v["t"], 3);
    assert_eq!(code(&laminar(dir.path(), &["verify", "c.txt"])), 0);

    let o = laminar(dir.path(), &["construct", "affine", "--q", "6"]);
    assert_eq!(code(&o), 2);
    assert!(!dir.path().join("affine-q6.txt").exists());
    let o = laminar(dir.path(), &["construct", "projective"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn verify_reports_a_witness() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("bad.txt"), "n=4 t=2\n1 2 3\n2 3 4\n").unwrap();
    let o = laminar(dir.path(), &["verify", "bad.txt", "--json"]);
    assert_eq!(code(&o), 1);
    let v = json(&o);
    assert_eq!(v["laminar"], false);
    assert_eq!(v["witness"]["rows"], serde_json::json!([1, 2]));
    assert_eq!(v["witness"]["columns"].as_array().unwrap().len(), 4);

    // the same pair is fine once t exceeds the intersection
    let o = laminar(dir.path(), &["verify", "bad.txt", "--t", "3"]);
    assert_eq!(code(&o), 0);

    fs::write(dir.path().join("junk.txt"), "n=4\n1 9\n").unwrap();
    assert_eq!(code(&laminar(dir.path(), &["verify", "junk.txt", "--t", "2"])), 2);
    assert_eq!(code(&laminar(dir.path(), &["verify", "missing.txt"])), 2);
}

#[test]
fn search_small_grounds() {
    let dir = tempfile::tempdir().unwrap();
    for (n, want) in [("3", 4), ("4", 8)] {
        let o = laminar(dir.path(), &["search", "--n", n, "--json"]);
        assert_eq!(code(&o), 0);
        let v = json(&o);
        assert_eq!(v["size"], want);
        assert_eq!(v["exact"], true);
    }
    let o = laminar(dir.path(), &["search", "--n", "6", "--gap", "--json"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["gap"]["holds"], true);
    assert_eq!(code(&laminar(dir.path(), &["search", "--n", "12"])), 2);
}

#[test]
fn summary_with_and_without_cache() {
    let dir = tempfile::tempdir().unwrap();
    let o = laminar(dir.path(), &["summary", "--no-cache", "--json"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert!(v["construction"]["ratio_decimal"].as_str().unwrap().starts_with("1.38180"));
    assert!(v["projective_series"]["decimal"].as_str().unwrap().starts_with("1.382060"));

    laminar(dir.path(), &["obf", "--N", "300", "--cache", "c.tsv"]);
    let o = laminar(dir.path(), &["summary", "--cache", "c.tsv", "--json"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["obf"]["N"], 300);
    assert_eq!(v["obf"]["audit"]["rec_bound"], true);
    assert_eq!(v["bracket"].as_array().unwrap().len(), 2);
}

#[test]
fn packing_is_written_and_valid() {
    let dir = tempfile::tempdir().unwrap();
    let o = laminar(dir.path(), &["packing", "--n", "9", "--k", "3", "--seed", "5", "-o", "p.txt"]);
    assert_eq!(code(&o), 0);
    assert_eq!(code(&laminar(dir.path(), &["verify", "p.txt"])), 0);
}
