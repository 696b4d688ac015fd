use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chebprime"))
        .args(args)
        .env("CHEBPRIME_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn records(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).expect("valid JSON line"))
        .collect()
}

fn single(args: &[&str]) -> (i32, Value) {
    let out = run(args);
    let mut recs = records(&out);
    assert_eq!(recs.len(), 1, "{args:?}");
    (out.status.code().unwrap(), recs.remove(0))
}

#[test]
fn strong_test_on_989() {
    let (code, r) = single(&["test", "989", "--strong"]);
    assert_eq!(code, 0);
    assert_eq!(r["schema_version"], "1");
    assert_eq!(r["inputs"]["Q"], "989");
    assert_eq!(r["epsilon"], -1);
    assert_eq!(r["delta"], 1);
    assert_eq!(r["profile"], serde_json::json!(["1"]));
    assert_eq!(r["verdict"], "pseudoprime-candidate");
}

#[test]
fn strong_test_rejects_15505() {
    let (code, r) = single(&["test", "15505", "--strong"]);
    assert_eq!(code, 1);
    assert_eq!(r["verdict"], "proved-composite");
    assert_eq!(r["certificate"]["reason"], "profile-rule");
}

#[test]
fn base_test_on_prime() {
    let (code, r) = single(&["test", "31"]);
    assert_eq!(code, 0);
    assert_eq!(r["verdict"], "probable-prime");
}

#[test]
fn several_tests_in_one_call() {
    let out = run(&["test", "97", "--strong", "--weak", "--mod-square"]);
    assert_eq!(out.status.code(), Some(0));
    let recs = records(&out);
    let tests: Vec<&str> = recs.iter().map(|r| r["inputs"]["test"].as_str().unwrap()).collect();
    assert_eq!(tests, ["strong", "weak", "mod-square"]);
}

#[test]
fn malformed_input_is_a_usage_error() {
    for args in [&["test", "12x"][..], &["test", "10"], &["test", "11", "--base", "b"]] {
        let (code, r) = single(args);
        assert_eq!(code, 2, "{args:?}");
        assert_eq!(r["verdict"], "error");
        assert!(r["certificate"]["message"].is_string());
    }
    assert_eq!(run(&["search", "dip", "--pmax", "x"]).status.code(), Some(2));
    assert_eq!(run(&["family", "riesel", "--r", "5", "--n", "3"]).status.code(), Some(2));
}

#[test]
fn family_verdicts_and_exit_codes() {
    let (code, r) = single(&["family", "mersenne", "--p", "7"]);
    assert_eq!((code, r["verdict"].as_str()), (0, Some("proved-prime")));
    let (code, r) = single(&["family", "fermat", "--n", "5"]);
    assert_eq!((code, r["verdict"].as_str()), (1, Some("proved-composite")));
    let (code, r) = single(&["family", "riesel", "--r", "5", "--n", "18", "--sufficiency"]);
    assert_eq!((code, r["verdict"].as_str()), (3, Some("inconclusive")));
    let (code, _) = single(&["family", "three-pow", "--n", "6", "--sign", "-1"]);
    assert_eq!(code, 0);
}

#[test]
fn dip_csv_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("dip.csv");
    let out = run(&[
        "search", "dip", "--q", "2", "--a", "2", "--pmax", "50", "--format", "csv", "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("p,phi,residue_digits,phi_is_prime"));
    assert_eq!(lines.count(), 14);
    assert!(String::from_utf8_lossy(&out.stderr).contains("\"rows\":\"14\""));
}

#[test]
fn census_independent_of_thread_count() {
    let a = Command::new(env!("CARGO_BIN_EXE_chebprime"))
        .args(["search", "pseudoprimes", "--limit", "20000"])
        .env("CHEBPRIME_THREADS", "1")
        .output()
        .unwrap();
    let b = Command::new(env!("CARGO_BIN_EXE_chebprime"))
        .args(["search", "pseudoprimes", "--limit", "20000"])
        .env("CHEBPRIME_THREADS", "4")
        .output()
        .unwrap();
    let rows = |o: &Output| -> Vec<Value> {
        records(o).into_iter().filter(|r| r.get("row").is_some()).collect()
    };
    assert_eq!(rows(&a), rows(&b));
    let qs: Vec<String> = rows(&a).iter().map(|r| r["row"]["Q"].as_str().unwrap().to_owned()).collect();
    assert_eq!(qs, ["989", "2701", "10609", "11041", "15505", "18721", "18817"]);
}

#[test]
fn sierpinski_cover() {
    let (code, r) = single(&[
        "search", "sierpinski-cover", "--k", "78557", "--cover", "3,5,7,13,19,37,73", "--period", "36",
    ]);
    assert_eq!((code, r["verdict"].as_str()), (0, Some("verified")));
    let (code, _) = single(&[
        "search", "sierpinski-cover", "--k", "21181", "--cover", "3,5,7,13,19,37,73", "--period", "36",
    ]);
    assert_eq!(code, 1);
}

#[test]
fn verify_suites() {
    let out = run(&["verify", "--suite", "theorem1", "--qrange", "-6..6", "--pmax", "13", "--arange", "2..6"]);
    assert_eq!(out.status.code(), Some(0));
    let recs = records(&out);
    assert_eq!(recs.last().unwrap()["verdict"], "verified");

    let out = run(&["verify", "--suite", "modsquare", "--qmax", "2000"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn weak_universal_list_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("a175530.txt");
    std::fs::write(&path, "# known values\n").unwrap();
    let out = run(&[
        "verify", "--suite", "weak-universal", "--weak-limit", "3000", "--oeis-a175530",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
}
