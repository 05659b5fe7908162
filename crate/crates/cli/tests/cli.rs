//! End-to-end runs of the `fcone` binary, one or more per exit code.

use std::path::PathBuf;
use std::process::{Command, Output};

use fcone_core::json::{feasibility_from_json, form_from_json, mdivisor_from_json};
use fcone_core::logfano::certificate_is_valid;
use fcone_core::{canonical_class, pullback_alpha, BoundaryCombo, FeasibilityResult, KDivisor};
use serde_json::Value;

fn fcone(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fcone"))
        .args(args)
        .env("FCONE_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json_of(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn verify_n4_exits_zero() {
    let o = fcone(&["verify", "--n", "4", "--combo", "a4=1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("VERIFIED"));
}

#[test]
fn verify_bare_canonical_class_is_refuted() {
    let o = fcone(&["verify", "--n", "4"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("REFUTED"));
}

#[test]
fn search_n6_exits_one_with_checkable_certificate() {
    let o = fcone(&["--json", "search", "--n", "6", "--bounds", "a4>=0,a6<=1"]);
    assert_eq!(o.status.code(), Some(1));
    let report = json_of(&o);
    assert_eq!(report["exit_status"], 1);
    let cert = &report["result"]["certificate"];
    let system: Vec<_> = cert["forms"]
        .as_array()
        .unwrap()
        .iter()
        .map(|f| form_from_json(f).unwrap())
        .collect();
    match feasibility_from_json(cert).unwrap() {
        FeasibilityResult::Infeasible { multipliers } => {
            assert!(certificate_is_valid(&system, &multipliers))
        }
        other => panic!("expected infeasible, got {other:?}"),
    }
}

#[test]
fn search_feasible_exits_zero() {
    let o = fcone(&["search", "--n", "4", "--bounds", "a4>=1", "--unit-box"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("FEASIBLE"));
}

#[test]
fn fcurves_beyond_fulton_range_exits_two() {
    // coefficient 1 on every key of M̄0,8 makes every F-value equal to -1
    let mut psi = serde_json::Map::new();
    let mut delta = serde_json::Map::new();
    for mask in 1u32..(1 << 8) - 1 {
        let labels: Vec<String> = (1..=8)
            .filter(|i| mask & (1 << (i - 1)) != 0)
            .map(|i| i.to_string())
            .collect();
        let k = labels.len();
        if k > 4 || (k == 4 && mask & 1 == 0) {
            continue;
        }
        let target = if k == 1 { &mut psi } else { &mut delta };
        target.insert(labels.join(","), Value::String("1".into()));
    }
    let doc = serde_json::json!({"m": 8, "psi": psi, "delta": delta});
    let path = scratch("m8.json", &doc.to_string());
    let o = fcone(&[
        "fcurves",
        "--divisor",
        path.to_str().unwrap(),
        "--sense",
        "negative",
    ]);
    assert_eq!(o.status.code(), Some(2), "{}", stdout(&o));
}

#[test]
fn fcurves_finds_first_violation() {
    let path = scratch(
        "k4.json",
        r#"{"m":5,"psi":{"5":"2"},"delta":{"1,2,3":"1","1,2,4":"1","1,3,4":"1","2,3,4":"1"}}"#,
    );
    let o = fcone(&[
        "--json",
        "fcurves",
        "--divisor",
        path.to_str().unwrap(),
        "--sense",
        "negative",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let report = json_of(&o);
    assert_eq!(
        report["result"]["witness"]["partition"],
        "{1,2}|{3}|{4}|{5}"
    );
    assert_eq!(report["result"]["witness"]["value"], "0");
}

#[test]
fn usage_and_parse_errors_exit_three() {
    assert_eq!(
        fcone(&["verify", "--n", "4", "--combo", "a4=1/0"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(
        fcone(&["verify", "--n", "4", "--combo", "a9=1"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(fcone(&["verify", "--bogus"]).status.code(), Some(3));
    assert_eq!(
        fcone(&["search", "--n", "6", "--bounds", "a4=>0"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(fcone(&["strata", "--n", "1"]).status.code(), Some(3));
    let bad = scratch("bad.json", "{\"n4\": ");
    assert_eq!(
        fcone(&["lemmas", "--expect", bad.to_str().unwrap()])
            .status
            .code(),
        Some(3)
    );
    let bad = scratch("bad-divisor.json", r#"{"m":5,"psi":{"5":2}}"#);
    assert_eq!(
        fcone(&["fcurves", "--divisor", bad.to_str().unwrap()])
            .status
            .code(),
        Some(3)
    );
}

#[test]
fn missing_file_exits_four() {
    let o = fcone(&["fcurves", "--divisor", "/nonexistent/divisor.json"]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn lemmas_match_and_are_deterministic() {
    let a = fcone(&["lemmas"]);
    let b = fcone(&["lemmas"]);
    assert_eq!(a.status.code(), Some(0), "{}", stdout(&a));
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert!(text.contains("-1\t-1\t10\t-6\tVERIFIED"));
    assert!(text.contains("-1/4\t-1/4\t65\t-33/4\tVERIFIED"));
    assert!(text.contains("INFEASIBLE"));
    assert!(text.contains("cited, not computed"));

    let a = fcone(&["--json", "lemmas"]);
    let b = fcone(&["--json", "lemmas"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json_of(&a)["result"]["mori_dream_space"]["status"], "cited");
}

#[test]
fn lemmas_mismatch_exits_one_with_diff() {
    let fixtures: Value = serde_json::from_str(include_str!("../fixtures/lemmas.json")).unwrap();
    let mut wrong = fixtures.clone();
    wrong["n5"]["beta"] = Value::String("-8".into());
    let path = scratch("wrong.json", &wrong.to_string());
    let o = fcone(&["lemmas", "--expect", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains(".n5.beta: expected \"-8\", got \"-33/4\""));
}

#[test]
fn pullback_alpha_round_trips() {
    let o = fcone(&[
        "--json",
        "pullback",
        "alpha",
        "--n",
        "5",
        "-K",
        "--combo",
        "a2=1/4,a4=1/4,a5=1",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let parsed = mdivisor_from_json(&json_of(&o)["result"]).unwrap();
    let combo = BoundaryCombo::parse(5, "a2=1/4,a4=1/4,a5=1").unwrap();
    let expected = pullback_alpha(&KDivisor::from_combo(&combo, true).unwrap()).unwrap();
    assert_eq!(parsed, expected);

    let text = fcone(&["pullback", "alpha", "--n", "4", "-K"]);
    let parsed: Value = serde_json::from_slice(&text.stdout).unwrap();
    assert_eq!(
        mdivisor_from_json(&parsed).unwrap(),
        pullback_alpha(&canonical_class(4).unwrap()).unwrap()
    );
}

#[test]
fn pullback_from_divisor_file() {
    let path = scratch("k7.json", r#"{"n":7,"K":true}"#);
    let o = fcone(&["pullback", "beta", "--divisor", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let lines: Vec<&str> = std::str::from_utf8(&o.stdout).unwrap().lines().collect();
    assert_eq!(lines.len(), 7);
    assert!(lines.iter().all(|l| l.ends_with("\t-11")));
}

#[test]
fn strata_tsv() {
    let o = fcone(&["strata", "--n", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("S\tDeltaKey\tBKey"));
    assert_eq!(lines.count(), 4);
}

#[test]
fn constraints_listing() {
    let o = fcone(&["constraints", "--n", "6"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 8);
    assert!(text.contains("3a2 - a3 - 1 < 0"));
    assert!(text.contains("2a3 - a4 < 0"));
    let full = fcone(&["constraints", "--n", "6", "--full"]);
    assert_eq!(stdout(&full).lines().count(), 351);
}
