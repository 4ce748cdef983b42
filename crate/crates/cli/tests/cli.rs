use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fragalign"))
        .args(args)
        .env_remove("FRAGALIGN_STATE_CAP")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> serde_json::Value {
    let o = run(args);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(&o)).unwrap()
}

#[test]
fn align_infix_pretty() {
    let o = run(&[
        "align",
        "--model",
        &fixture("fig1.pnml"),
        "--trace",
        "d,g",
        "--kind",
        "infix",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "log   | d  | g");
    assert_eq!(lines[1], "model | d  | g");
    assert!(lines[3].starts_with("kind: infix  cost: 0"));
}

#[test]
fn align_tree_and_postfix_json() {
    let v = json(&[
        "align",
        "--model",
        &fixture("fig2.ptree"),
        "--trace",
        "b,d,f",
        "--kind",
        "infix",
        "--method",
        "advanced",
        "--output",
        "json",
    ]);
    assert_eq!(v["cost"], 0);
    let v = json(&[
        "align",
        "--model",
        &fixture("fig1.pnml"),
        "--trace",
        "a,d,g",
        "--kind",
        "postfix",
        "--output",
        "json",
    ]);
    assert_eq!(v["cost"], 2);
    assert_eq!(v["end_marking"], serde_json::json!(["p12"]));
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys, ["kind", "cost", "moves", "start_marking", "end_marking", "stats"]);
    assert_eq!(v["moves"][0]["model_transition"], serde_json::Value::Null);
}

#[test]
fn align_trace_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.json");
    std::fs::write(&path, r#"{"activities": ["d", "a", "e", "h"]}"#).unwrap();
    let v = json(&[
        "align",
        "--model",
        &fixture("fig1.pnml"),
        "--trace-file",
        path.to_str().unwrap(),
        "--output",
        "json",
    ]);
    assert_eq!(v["cost"], 5);
    assert_eq!(v["kind"], "complete");
}

#[test]
fn advanced_on_a_net_is_an_error() {
    let o = run(&[
        "align",
        "--model",
        &fixture("fig1.pnml"),
        "--trace",
        "d",
        "--kind",
        "infix",
        "--method",
        "advanced",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("process tree"));
}

#[test]
fn validate_exit_codes() {
    let o = run(&["validate", "--model", &fixture("fig1.pnml")]);
    assert_eq!((o.status.code(), stdout(&o).trim()), (Some(0), "valid"));
    assert_eq!(
        run(&["validate", "--model", &fixture("fig2.ptree")]).status.code(),
        Some(0)
    );
    assert_eq!(
        run(&["validate", "--model", &fixture("broken.pnml")]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["validate", "--model", &fixture("missing.pnml")]).status.code(),
        Some(1)
    );
}

#[test]
fn bench_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let csv = |name: &str, jobs: &str| {
        let out = dir.path().join(name);
        let o = run(&[
            "bench",
            "--model",
            &fixture("fig2.ptree"),
            "--log",
            &fixture("fig1_log.jsonl"),
            "--n",
            "200",
            "--seed",
            "9",
            "--methods",
            "baseline,filtered,advanced",
            "--kind",
            "infix",
            "--no-timing",
            "--jobs",
            jobs,
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        assert!(stdout(&o).contains("cost mismatches: 0"));
        std::fs::read_to_string(out).unwrap()
    };
    let a = csv("a.csv", "1");
    assert_eq!(a, csv("b.csv", "4"));
    assert_eq!(a.lines().count(), 601);
}

#[test]
fn simulate_then_bench_postfixes() {
    let dir = tempfile::tempdir().unwrap();
    let log = dir.path().join("log.xes");
    let o = run(&[
        "simulate",
        "--model",
        &fixture("fig1.pnml"),
        "--traces",
        "20",
        "--seed",
        "3",
        "--out",
        log.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&[
        "bench",
        "--model",
        &fixture("fig1.pnml"),
        "--log",
        log.to_str().unwrap(),
        "--n",
        "30",
        "--kind",
        "postfix",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn dot_output() {
    let o = run(&["dot", "--model", &fixture("fig1.pnml")]);
    assert!(stdout(&o).starts_with("digraph"));
    let o = run(&["dot", "--model", &fixture("fig1.pnml"), "--aux", "--trace", "b,d,f"]);
    let out = stdout(&o);
    assert_eq!(out.matches("fillcolor=blue").count(), 6);
    assert_eq!(out.matches("fillcolor=red").count(), 6);
}

#[test]
fn state_cap_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_fragalign"))
        .args([
            "align",
            "--model",
            &fixture("fig1.pnml"),
            "--trace",
            "d,g",
            "--kind",
            "infix",
        ])
        .env("FRAGALIGN_STATE_CAP", "3")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("cap of 3"));
}
