use std::process::{Command, Output};

use serde_json::Value;

fn isogeo(cache: &std::path::Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_isogeo")).env("ISOGEO_CACHE_DIR", cache).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("valid json")
}

#[test]
fn same_seed_gives_identical_json() {
    let cache = tempfile::tempdir().unwrap();
    let args = ["secant", "--variety", "spinor-min", "--n", "6..7", "--h", "auto", "--format", "json", "--seed", "7"];
    let cold = isogeo(cache.path(), &args);
    let warm = isogeo(cache.path(), &args);
    assert!(cold.status.success());
    assert_eq!(cold.stdout, warm.stdout);
    let v = json(&cold);
    assert_eq!(v["schema"], "isogeo/1");
    assert_eq!(v["config"]["seed"], 7);
    assert_eq!(v["rows"].as_array().unwrap().len(), 4);

    let args = ["osc-dim", "--variety", "lg", "--n", "3..4", "--format", "json"];
    let cold = isogeo(cache.path(), &args);
    assert!(std::fs::read_dir(cache.path()).unwrap().count() >= 2);
    let warm = isogeo(cache.path(), &args);
    assert_eq!(cold.stdout, warm.stdout);
}

#[test]
fn osc_dim_reports_all_three_counts() {
    let cache = tempfile::tempdir().unwrap();
    let out = isogeo(cache.path(), &["osc-dim", "--variety", "spinor-min", "--n", "5", "--s", "2", "--format", "json"]);
    let row = &json(&out)["rows"][0];
    assert_eq!((row["formula"].as_i64(), row["jets"].as_i64(), row["basis"].as_i64()), (Some(15), Some(15), Some(15)));
    assert_eq!(row["full"], true);
    let out = isogeo(cache.path(), &["osc-dim", "--variety", "lg", "--n", "4", "--s", "2", "--format", "json"]);
    let row = &json(&out)["rows"][0];
    // the pair count overstates the span of LG(4,8): jets see 30, the closed forms 31
    assert_eq!((row["formula"].as_i64(), row["jets"].as_i64(), row["basis"].as_i64()), (Some(31), Some(30), Some(31)));
    assert_eq!(row["agree"], false);
    assert!(out.status.success());
}

#[test]
fn csv_header_and_defective_row() {
    let cache = tempfile::tempdir().unwrap();
    let out = isogeo(cache.path(), &["secant", "--variety", "spinor-pl", "--n", "4", "--h", "3", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("variety,n,h,N,dimX,expected,rank,verdict,field,seed,trials"));
    assert!(lines.next().unwrap().contains(",defective-evidence,"));
}

#[test]
fn thin_wrappers() {
    let cache = tempfile::tempdir().unwrap();
    let row = |args: &[&str]| json(&isogeo(cache.path(), args))["rows"].clone();
    let p = row(&["project", "--variety", "spinor-pl", "--n", "3", "--s", "1", "--format", "json"]);
    assert_eq!((p[0]["result"].as_str(), p[0]["fiber_dim"].as_u64()), (Some("contracts"), Some(1)));
    let w = row(&["well-behaved", "--variety", "lg", "--n", "4", "--format", "json"]);
    assert!(w.as_array().unwrap().iter().all(|r| r["equal"] == true));
    let r = row(&["regularity", "--variety", "spinor-min", "--n", "6", "--s1", "0", "--s2", "1", "--format", "json"]);
    assert_eq!(r[0]["verdict"], "pass");
    let r = row(&["reconstruct", "--variety", "lg", "--n", "4", "--trials", "20", "--format", "json"]);
    assert_eq!(r[0]["recovered"], 20);
    let f = row(&["flat-limit", "--variety", "spinor-pl", "--n", "4", "--format", "json"]);
    assert_eq!((f[0]["limit_dim"].as_i64(), f[0]["contained"].as_bool()), (Some(1), Some(true)));
    let s = row(&["osc-space", "--variety", "spinor-min", "--n", "4", "--s", "1", "--format", "json"]);
    assert_eq!(s[0]["coordinates"].as_array().unwrap().len(), 7);
}

#[test]
fn errors_exit_nonzero() {
    let cache = tempfile::tempdir().unwrap();
    let out = isogeo(cache.path(), &["secant", "--variety", "lg", "--n", "4"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--h"));
    let out = isogeo(cache.path(), &["regularity", "--variety", "lg", "--n", "3", "--s1", "3", "--s2", "0"]);
    assert_eq!(out.status.code(), Some(2));
    let out = isogeo(cache.path(), &["osc-dim", "--variety", "spinor", "--n", "3"]);
    assert_eq!(out.status.code(), Some(2));
    let out = isogeo(cache.path(), &["secant", "--variety", "lg", "--n", "4", "--h", "2", "--field", "fp:10"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn output_file_matches_stdout() {
    let cache = tempfile::tempdir().unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("b.json");
    let args = ["binomial-check", "--n", "4..5", "--format", "json"];
    let out = isogeo(cache.path(), &args);
    let mut with_out: Vec<&str> = args.to_vec();
    let p = path.to_str().unwrap();
    with_out.extend(["--out", p]);
    let quiet = isogeo(cache.path(), &with_out);
    assert!(quiet.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), out.stdout);
    assert_eq!(json(&out)["ok"], true);
}
