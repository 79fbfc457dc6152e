//! The `pclab` binary: exit codes, output files and reproducibility.

mod common;

use std::process::{Command as Process, Output};

use common::{params, run, schema_errors};
use pclab::{Command, Params};
use serde_json::Value;

fn pclab(args: &[&str]) -> Output {
    Process::new(env!("CARGO_BIN_EXE_pclab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_report(out: &Output) -> Value {
    let v: Value = serde_json::from_slice(&out.stdout).expect("stdout is a JSON report");
    let errors = schema_errors(&v);
    assert!(errors.is_empty(), "{errors:?}");
    v
}

#[test]
fn verified_exits_zero() {
    let out = pclab(&["vlm", "--q", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_report(&out);
    assert_eq!(v["verdict"], "verified");
    assert_eq!(v["metrics"]["omega"], 3);
    assert_eq!(v["field"]["N"], 2);
}

#[test]
fn refuted_exits_one_with_witnesses() {
    let out = pclab(&["maximal-peisert", "--q", "3"]);
    assert_eq!(out.status.code(), Some(1));
    let v = stdout_report(&out);
    assert_eq!(v["verdict"], "refuted");
    let w = v["witnesses"].as_array().unwrap();
    // F_3 plus one vertex, then the 9-element subspace
    assert_eq!(w[0].as_array().unwrap().len(), 4);
    assert_eq!(w[1].as_array().unwrap().len(), 9);
}

#[test]
fn inapplicable_exits_two() {
    let out = pclab(&["mullin", "--q", "5"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stdout_report(&out)["verdict"], "hypothesis_not_applicable");
    // GP*(25, 8) needs 25 = 1 mod 16
    let out = pclab(&["gpstar", "--q", "5", "--d", "8"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn timeout_exits_three_with_bounds() {
    let out = pclab(&["vlm", "--q", "13", "--budget-ms", "0"]);
    assert_eq!(out.status.code(), Some(3));
    let v = stdout_report(&out);
    let b = &v["metrics"]["bounds"];
    assert!(b["lower"].as_u64().unwrap() <= 13 && 13 <= b["upper"].as_u64().unwrap());
}

#[test]
fn usage_errors_exit_four() {
    for args in [
        &["vlm", "--q", "4"][..],
        &["vlm"],
        &["sziklai", "--q", "5"],
        &["charsum", "--q", "3", "--ext", "2", "--kind", "nope"],
        &["nonsense"],
        &["vlm", "--q", "five"],
    ] {
        let out = pclab(args);
        assert_eq!(out.status.code(), Some(4), "{args:?}");
    }
    assert_eq!(pclab(&["--help"]).status.code(), Some(0));
}

#[test]
fn json_flag_writes_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let out = pclab(&["gpstar", "--p", "3", "--n", "2", "--d", "10", "--json", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("max_cliques_zero=9"));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!(schema_errors(&v).is_empty());
    assert_eq!(v["metrics"]["counts"]["max_cliques_zero"], 9);
}

#[test]
fn charsum_csv_has_one_row_per_check() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("katz.csv");
    let out = pclab(&["charsum", "--kind", "katz", "--q", "3", "--ext", "2", "--csv", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let mut rd = csv::Reader::from_path(&path).unwrap();
    assert_eq!(
        rd.headers().unwrap().iter().collect::<Vec<_>>(),
        ["label", "chi", "magnitude", "bound", "margin", "holds"]
    );
    let rows: Vec<csv::StringRecord> = rd.records().map(Result::unwrap).collect();
    // 6 elements of degree 2 over F_3 times 7 nontrivial characters
    assert_eq!(rows.len(), 42);
    assert!(rows.iter().all(|r| &r[5] == "true"));
    let bound: f64 = rows[0][3].parse().unwrap();
    assert!((bound - 3f64.sqrt()).abs() < 1e-9);
}

#[test]
fn cache_dir_is_reused() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let first = stdout_report(&pclab(&["vlm", "--q", "7", "--cache-dir", d]));
    assert!(std::fs::read_dir(dir.path()).unwrap().count() >= 1);
    let second = stdout_report(&pclab(&["vlm", "--q", "7", "--cache-dir", d]));
    assert_eq!(first["field"], second["field"]);
    assert_eq!(first["metrics"]["counts"], second["metrics"]["counts"]);
}

#[test]
fn reruns_are_identical_apart_from_timings() {
    let cases = [
        (Command::Directions, Params { q: Some(9), mode: Some("ball".into()), samples: Some(200), seed: 7, ..params() }),
        (Command::Charsum, Params { q: Some(5), ext: Some(3), kind: Some("katz".into()), samples: Some(300), seed: 3, ..params() }),
        (Command::Gpstar, Params { q: Some(9), d: Some(10), ..params() }),
    ];
    for (cmd, p) in cases {
        let a = run(cmd, p.clone()).without_timings();
        let b = run(cmd, p.clone()).without_timings();
        assert_eq!(a, b);
        // and across thread counts
        let c = run(cmd, Params { threads: 4, ..p }).without_timings();
        assert_eq!(a.metrics, c.metrics);
        assert_eq!(a.witnesses, c.witnesses);
    }
}

#[test]
fn different_seeds_sample_differently() {
    let p = |seed| Params { q: Some(5), ext: Some(3), kind: Some("katz".into()), samples: Some(50), seed, ..params() };
    let a = run(Command::Charsum, p(1));
    let b = run(Command::Charsum, p(2));
    assert_ne!(a.metrics.margins, b.metrics.margins);
}
