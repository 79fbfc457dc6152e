mod common;

use common::{assert_valid, params, run, schema_errors};
use pclab::{Command, Family, Params, Verdict};

#[test]
fn reports_of_every_kind_validate() {
    let cases: Vec<(Command, Params)> = vec![
        (Command::Vlm, Params { q: Some(5), ..params() }),
        (Command::Mullin, Params { q: Some(5), ..params() }),
        (Command::MaximalPeisert, Params { q: Some(3), ..params() }),
        (Command::Gpstar, Params { q: Some(9), d: Some(10), expect_count: Some(9), ..params() }),
        (Command::MaximalGp, Params { q: Some(11), d: Some(7), ext: Some(3), ..params() }),
        (Command::CorImprovement, Params { q: Some(9), ..params() }),
        (Command::Stability, Params { q: Some(5), family: Some(Family::Gpaley), d: Some(3), ..params() }),
        (Command::Charsum, Params { q: Some(3), ext: Some(2), kind: Some("katz".into()), ..params() }),
        (Command::Epsilon, Params { d: Some(8), ..params() }),
        (Command::Epsilon, Params { points: Some(vec![[1.0, 0.0], [-1.0, 0.0]]), ..params() }),
        (Command::Directions, Params { q: Some(9), mode: Some("ball".into()), samples: Some(20), ..params() }),
        (Command::Vlm, Params { q: Some(13), budget_ms: 0, ..params() }),
    ];
    let mut seen = std::collections::BTreeSet::new();
    for (cmd, p) in cases {
        let r = run(cmd, p);
        assert_valid(&r);
        seen.insert(format!("{:?}", r.verdict));
    }
    // every verdict kind was exercised
    assert_eq!(seen.len(), 4, "{seen:?}");
}

#[test]
fn schema_rejects_malformed_reports() {
    let r = run(Command::MaximalPeisert, Params { q: Some(3), ..params() });
    assert_eq!(r.verdict, Verdict::Refuted);
    let mut v = serde_json::to_value(&r).unwrap();
    v["witnesses"] = serde_json::json!([]);
    assert!(!schema_errors(&v).is_empty(), "refuted without witnesses must fail");
    let mut v = serde_json::to_value(&r).unwrap();
    v["verdict"] = serde_json::json!("maybe");
    assert!(!schema_errors(&v).is_empty());
    let mut v = serde_json::to_value(&r).unwrap();
    v["schema_version"] = serde_json::json!(2);
    assert!(!schema_errors(&v).is_empty());
}

#[test]
fn reports_round_trip_through_json() {
    let r = run(Command::Vlm, Params { q: Some(7), ..params() });
    let back: pclab::Report = serde_json::from_str(&r.to_json()).unwrap();
    assert_eq!(back, r);
}
