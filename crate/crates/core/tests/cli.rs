use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_weilrank");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn run_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(BIN)
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(input.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn records(o: &Output) -> Vec<Value> {
    stdout(o)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

#[test]
fn analyze_exit_codes() {
    let ok = run(&["analyze", "--q", "5", "--poly", "5,-1,1", "--json"]);
    assert_eq!(ok.status.code(), Some(0));
    let v = &records(&ok)[0];
    assert_eq!(v["schema"], "weilrank/1");
    assert_eq!(v["valid"], true);
    let rh = run(&["analyze", "--q", "5", "--poly", "5,-5,1", "--json"]);
    assert_eq!(rh.status.code(), Some(2));
    assert_eq!(records(&rh)[0]["error"], "RiemannHypothesisFails");
    let fe = run(&["analyze", "--q", "5", "--poly", "4,-1,1", "--json"]);
    assert_eq!(fe.status.code(), Some(2));
    assert_eq!(records(&fe)[0]["error"], "FunctionalEquationFails");
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(
        run(&["analyze", "--q", "5", "--poly", "5,x,1"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(run(&["analyze", "--q", "5"]).status.code(), Some(1));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(
        run(&["cubic-field", "--p", "5", "--l", "11"]).status.code(),
        Some(1)
    );
    // not sufficiently large without --auto-extend
    assert_eq!(
        run(&["classify", "--q", "5", "--poly", "5,0,1"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        run(&["classify", "--q", "5", "--poly", "5,0,1", "--auto-extend"])
            .status
            .code(),
        Some(0)
    );
}

#[test]
fn numbers_are_strings() {
    fn check(v: &Value) {
        match v {
            Value::Number(n) => panic!("bare number {n}"),
            Value::Array(a) => a.iter().for_each(check),
            Value::Object(m) => m.values().for_each(check),
            _ => {}
        }
    }
    let o = run(&["classify", "--q", "5", "--poly", "5,-1,1", "--oracle-check"]);
    assert_eq!(o.status.code(), Some(0));
    check(&records(&o)[0]);
    let o = run(&["oracle", "--q", "9", "--poly", "729,-486,252,-102,28,-6,1"]);
    check(&records(&o)[0]);
}

#[test]
fn enumerate_and_base_change() {
    let o = run(&["enumerate", "--g", "1", "--q", "5"]);
    assert_eq!(records(&o).len(), 9);
    let o = run(&["base-change", "--n", "2", "--q", "5", "--poly", "5,0,1"]);
    assert_eq!(
        records(&o)[0]["coeffs"],
        serde_json::json!(["25", "10", "1"])
    );
}

#[test]
fn report_round_trip() {
    let first = run(&[
        "classify",
        "--q",
        "9",
        "--poly",
        "729,-486,252,-102,28,-6,1",
        "--oracle-check",
    ]);
    assert_eq!(first.status.code(), Some(0));
    let v = &records(&first)[0];
    assert_eq!(v["neat"], false);
    assert_eq!(v["rank"], "2");
    let again = run_stdin(
        &["classify", "--batch", "-", "--oracle-check"],
        &format!("{}\n", v["input"]),
    );
    assert_eq!(again.status.code(), Some(0));
    assert_eq!(stdout(&first), stdout(&again));
}

#[test]
fn batch_keeps_order_and_takes_max_exit() {
    let input = "{\"coeffs\":[\"5\",\"-1\",\"1\"],\"q\":\"5\"}\n{\"coeffs\":[\"5\",\"-5\",\"1\"],\"q\":\"5\"}\n{\"coeffs\":[\"5\",\"-2\",\"1\"],\"q\":\"5\"}\n";
    let o = run_stdin(&["classify", "--batch", "-"], input);
    assert_eq!(o.status.code(), Some(2));
    let r = records(&o);
    assert_eq!(r.len(), 3);
    assert_eq!(r[0]["input"]["coeffs"], serde_json::json!(["5", "-1", "1"]));
    assert_eq!(r[1]["error"], "RiemannHypothesisFails");
    assert_eq!(r[2]["input"]["coeffs"], serde_json::json!(["5", "-2", "1"]));
}

#[test]
fn golden_nonneat_fixture() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/nonneat.jsonl");
    let o = run(&["classify", "--batch", path, "--oracle-check"]);
    assert_eq!(o.status.code(), Some(0));
    let r = records(&o);
    assert_eq!(r.len(), 2);
    for v in r {
        assert_eq!(v["neat"], false);
        assert_eq!(v["rank"], "2");
        assert_eq!(v["conditions"], serde_json::json!([true, true, true]));
        assert_eq!(v["newton"], "almost_ordinary");
        assert_eq!(v["oracle"]["rank"], "2");
    }
}
