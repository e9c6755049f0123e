use std::process::{Command, Output};

use serde_json::Value;

fn gaplab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gaplab")).args(args).env_remove("GAPLAB_OUT_DIR").output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON report")
}

fn without_timings(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("timings");
    v
}

#[test]
fn gaps_example() {
    let out = gaplab(&["gaps", "--alpha", "5/8", "--n", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["schema_version"], 1);
    assert_eq!(r["result"]["spectrum"]["distinct"], serde_json::json!(["1/8", "1/4", "3/8"]));
    assert!(r["verdicts"].as_array().unwrap().iter().all(|v| v["pass"] == true));
}

#[test]
fn decimal_alpha_is_exact() {
    let a = json(&gaplab(&["gaps", "--alpha", "0.625", "--n", "4"]));
    let b = json(&gaplab(&["gaps", "--alpha", "5/8", "--n", "4"]));
    assert_eq!(a["config"]["alpha"], "5/8");
    assert_eq!(a["result"], b["result"]);
}

#[test]
fn prop1_example() {
    let out = gaplab(&["prop1", "--n", "4", "--s", "1,2"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["result"]["instance"]["b"], serde_json::json!([1, 2, 14, 15]));
    let ss = r["result"]["instance"]["sumset_len"].as_u64().unwrap();
    assert!(ss <= 32);
}

#[test]
fn verify_all_passes_and_is_deterministic() {
    let args = ["verify", "--suite", "all", "--seed", "42", "--trials", "200"];
    let first = gaplab(&args);
    assert_eq!(first.status.code(), Some(0), "{}", String::from_utf8_lossy(&first.stderr));
    let second = gaplab(&args);
    assert_eq!(without_timings(json(&first)), without_timings(json(&second)));
}

#[test]
fn random_inputs_follow_the_seed() {
    let run = |seed: &str| without_timings(json(&gaplab(&["nn-census", "--random", "200", "--dim", "2", "--seed", seed])));
    assert_eq!(run("5"), run("5"));
    assert_ne!(run("5")["result"], run("6")["result"]);
}

#[test]
fn failed_verdict_exits_one_with_counterexample() {
    let out = gaplab(&["kissing", "--points", "1/10,0;0,1/10;1/20,1/20"]);
    assert_eq!(out.status.code(), Some(1));
    let r = json(&out);
    let v = &r["verdicts"][0];
    assert_eq!(v["pass"], false);
    assert!(v["counterexample"]["pairwise"].is_object());
}

#[test]
fn invalid_input_exits_two() {
    for args in [
        &["gaps", "--alpha", "1/2", "--n", "4"][..],
        &["gaps", "--alpha", "x/3", "--n", "2"],
        &["prop1", "--n", "4", "--s", "1,2,3"],
        &["extract-core", "--m", "3", "--epsilon", "2"],
        &["generators", "--b", "0,0.1,0.2,0.3", "--c", "0"],
        &["verify", "--trials", "0"],
    ] {
        let out = gaplab(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(!err.trim().is_empty(), "{args:?} printed no diagnostic");
    }
}

#[test]
fn csv_and_output_directory() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_gaplab"))
        .args(["example5", "--m", "3", "--format", "csv", "--seed", "7"])
        .env("GAPLAB_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(dir.path().join("example5-7.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("kind,name,value,pass"));
    assert!(text.contains("verdict,census_at_least_m,"));

    let explicit = dir.path().join("nested/report.json");
    let out = gaplab(&["cover", "--b", "0,1/10,3/10", "--out", explicit.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&explicit).unwrap()).unwrap();
    assert_eq!(r["command"], "cover");
}

#[test]
fn generator_certificate_for_spec_set() {
    let r = json(&gaplab(&["generators", "--b", "0,0.1,0.2,0.3", "--c", "0,0.3", "--target", "9/10"]));
    assert_eq!(r["result"]["certificate"]["parts"], serde_json::json!(["1/10", "1/10", "7/10"]));
    assert_eq!(r["result"]["generators"]["r_minus"], serde_json::json!(["1/10", "7/10"]));
}
