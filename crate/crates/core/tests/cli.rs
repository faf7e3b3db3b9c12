use std::path::Path;

use rz_lattice::cli::{read_census, run};
use serde_json::Value;

struct Out {
    code: i32,
    stdout: String,
    stderr: String,
}

fn rzlat(cache: &Path, args: &[&str]) -> Out {
    let mut argv = vec!["rzlat".to_string()];
    argv.extend(args.iter().map(|s| s.to_string()));
    if !args.is_empty() && !args[0].starts_with('-') && args[0] != "help" {
        argv.push("--cache-dir".into());
        argv.push(cache.display().to_string());
    }
    let (mut o, mut e) = (Vec::new(), Vec::new());
    let code = run(argv, &mut o, &mut e);
    Out { code, stdout: String::from_utf8(o).unwrap(), stderr: String::from_utf8(e).unwrap() }
}

fn lines(s: &str) -> Vec<Value> {
    s.lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

#[test]
fn enumerate_hearts_writes_header_then_records() {
    let dir = tempfile::tempdir().unwrap();
    let o = rzlat(dir.path(), &["enumerate", "hearts", "--p", "2", "--n", "4"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let v = lines(&o.stdout);
    assert_eq!(v.len(), 28);
    let h = &v[0];
    assert_eq!(h["command"], "enumerate hearts");
    assert_eq!((h["p"].as_u64(), h["n"].as_u64(), h["N"].as_u64()), (Some(2), Some(4), Some(6)));
    assert!(v[1].get("Lambda_prime").is_some());
}

#[test]
fn enumerate_is_cached_and_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["enumerate", "dl", "--p", "3", "--n", "2", "--k", "1"];
    let a = rzlat(dir.path(), &args);
    let b = rzlat(dir.path(), &args);
    assert_eq!(a.code, 0);
    assert!(!a.stderr.contains("cache hit"));
    assert!(b.stderr.contains("cache hit"));
    assert_eq!(a.stdout, b.stdout);
    let mut nc = args.to_vec();
    nc.push("--no-cache");
    assert_eq!(rzlat(dir.path(), &nc).stdout, a.stdout);
    assert_eq!(lines(&a.stdout).len(), 5);
}

#[test]
fn naive_and_pruned_agree_through_the_cli() {
    let dir = tempfile::tempdir().unwrap();
    for kind in ["rz", "y", "dl", "hearts"] {
        let base = ["enumerate", kind, "--p", "2", "--n", "2", "--k", "1", "--no-cache"];
        let a = rzlat(dir.path(), &base);
        let mut nv = base.to_vec();
        nv.push("--naive");
        let b = rzlat(dir.path(), &nv);
        assert_eq!(a.code, 0, "{kind}: {}", a.stderr);
        assert_eq!(lines(&a.stdout)[1..], lines(&b.stdout)[1..], "{kind}");
    }
}

#[test]
fn verify_report_shape_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["verify", "all", "--p", "2", "--n", "2", "--samples", "10"];
    let a = rzlat(dir.path(), &args);
    assert_eq!(a.code, 0, "{}", a.stderr);
    let doc: Value = serde_json::from_str(&a.stdout).unwrap();
    assert_eq!(doc["status"], "pass");
    let reports = doc["reports"].as_array().unwrap();
    assert!(reports.iter().all(|r| r["seconds"].is_null() && r["status"] == "pass"));
    assert_eq!(rzlat(dir.path(), &args).stdout, a.stdout);

    let t = rzlat(dir.path(), &["verify", "pairing", "--samples", "5", "--timing"]);
    let doc: Value = serde_json::from_str(&t.stdout).unwrap();
    assert!(doc["reports"][0]["seconds"].is_f64());
}

#[test]
fn failing_verify_saves_a_replayable_counterexample() {
    let dir = tempfile::tempdir().unwrap();
    let o = rzlat(dir.path(), &["verify", "beta", "--p", "2", "--n", "4", "--k", "2", "--mutant", "unscaled-beta"]);
    assert_eq!(o.code, 1);
    let saved: Vec<_> = std::fs::read_dir(dir.path().join("counterexamples")).unwrap().collect();
    assert_eq!(saved.len(), 1);
    let file = saved[0].as_ref().unwrap().path();
    let r = rzlat(dir.path(), &["replay", file.to_str().unwrap(), "--p", "2", "--n", "4"]);
    assert_eq!(r.code, 1);
    let doc: Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(doc["reproduces"], true);
}

#[test]
fn table_round_trips_and_flags_mismatches() {
    let dir = tempfile::tempdir().unwrap();
    let o = rzlat(dir.path(), &["table", "--p", "2", "--n", "4", "--j-range", "1-2"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert!(o.stdout.starts_with("# {"));
    let rows = read_census(o.stdout.as_bytes()).unwrap();
    let counts: Vec<_> = rows.iter().map(|r| (r.k, r.j, r.count)).collect();
    assert_eq!(counts, vec![(1, 1, 45), (1, 2, 369), (2, 1, 135), (2, 2, 459)]);

    let bad = rzlat(dir.path(), &["table", "--p", "2", "--n", "2", "--mutant", "count-off-by-one"]);
    assert_eq!(bad.code, 1);
    assert!(read_census(bad.stdout.as_bytes()).unwrap().iter().any(|r| r.matches == Some(false)));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(rzlat(d, &["--help"]).code, 0);
    assert_eq!(rzlat(d, &["frobnicate"]).code, 3);
    assert_eq!(rzlat(d, &["enumerate", "dl", "--n", "4", "--k", "3"]).code, 3);
    assert_eq!(rzlat(d, &["enumerate", "rz", "--p", "4"]).code, 3);
    assert_eq!(rzlat(d, &["enumerate", "hearts", "--n", "3"]).code, 3);
    assert_eq!(rzlat(d, &["verify", "duality", "--format", "csv"]).code, 3);
    assert_eq!(rzlat(d, &["enumerate", "rz", "--n", "4", "--ceiling", "100"]).code, 2);
    assert_eq!(rzlat(d, &["verify", "duality", "--N", "3", "--samples", "5"]).code, 2);
    assert_eq!(rzlat(d, &["verify", "duality", "--samples", "20", "--mutant", "sign-bug"]).code, 1);
}

#[test]
fn out_file_is_written() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("hearts.jsonl");
    let o = rzlat(dir.path(), &["enumerate", "hearts", "-o", path.to_str().unwrap()]);
    assert_eq!(o.code, 0);
    assert!(o.stdout.is_empty());
    assert_eq!(lines(&std::fs::read_to_string(path).unwrap()).len(), 4);
}
