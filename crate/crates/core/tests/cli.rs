use std::io::Write;
use std::process::{Command, Stdio};

use serde_json::Value;

fn fixture(name: &str) -> String {
    format!("{}/tests/fixtures/{name}.json", env!("CARGO_MANIFEST_DIR"))
}

fn htl(args: &[&str], stdin: &str) -> (i32, String, String) {
    let mut child = Command::new(env!("CARGO_BIN_EXE_htl"))
        .args(args)
        .env_remove("HTL_SEED")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    let _ = child.stdin.take().unwrap().write_all(stdin.as_bytes());
    let out = child.wait_with_output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

fn report(out: &str) -> Value {
    serde_json::from_str(out.trim()).unwrap()
}

const J2: &str = r#"{"rows":2,"cols":2,"entries":[["0","1"],["0","0"]]}"#;
const TENSOR_PAIR: &str = r#"{"maps":[
    {"rows":4,"cols":4,"entries":[["0","0","1","0"],["0","0","0","1"],["0","0","0","0"],["0","0","0","0"]]},
    {"rows":4,"cols":4,"entries":[["0","1","0","0"],["0","0","0","0"],["0","0","0","1"],["0","0","0","0"]]}]}"#;

#[test]
fn wfilt_of_a_single_block() {
    let (code, out, _) = htl(&["wfilt", "--input", "-"], J2);
    assert_eq!(code, 0);
    let r = report(&out);
    assert_eq!(r["data"]["weights"], serde_json::json!({"-1": 1, "1": 1}));
    assert!(r["verdicts"].as_array().unwrap().iter().all(|v| v["pass"] == true));
}

#[test]
fn hodge_mode_on_tensor_pair() {
    let (code, out, _) = htl(&["compat", "--input", "-", "--mode", "hodge"], TENSOR_PAIR);
    assert_eq!(code, 0, "{out}");
    assert_eq!(report(&out)["verdicts"][0]["check"], "hodge_type");
}

#[test]
fn failing_fixture_reports_witness() {
    let (code, out, _) = htl(&["compat", "--input", &fixture("failing_sequential_pair"), "--mode", "seq"], "");
    assert_eq!(code, 1);
    let v = &report(&out)["verdicts"][0];
    assert_eq!(v["pass"], false);
    assert!(v["witness"]["h"].is_array(), "{v}");
    assert!(v["witness"]["detail"].as_str().unwrap().contains("image"), "{v}");
}

#[test]
fn purity_of_tensor_pair() {
    let (code, out, _) = htl(&["purity", "--input", "-", "--graded"], TENSOR_PAIR);
    assert_eq!(code, 0, "{out}");
    let r = report(&out);
    let checks: Vec<&str> = r["verdicts"].as_array().unwrap().iter().map(|v| v["check"].as_str().unwrap()).collect();
    assert!(checks.windows(2).all(|w| w[0] <= w[1]), "{checks:?}");
    assert!(checks.contains(&"graded_vanishing") && checks.contains(&"purity"));
}

#[test]
fn birkhoff_reconstruction_is_exact() {
    let (_, bundle, _) = htl(&["model", "--name", "sym", "--args", "l=3,p=2"], "");
    let (code, out, _) = htl(&["twistor", "--input", "-", "--op", "birkhoff"], &bundle);
    assert_eq!(code, 0, "{out}");
    assert_eq!(report(&out)["verdicts"][0]["witness"], "exact");
}

#[test]
fn model_pipes_into_split() {
    let (code, bundle, _) = htl(&["model", "--name", "mod2", "--args", "p=0"], "");
    assert_eq!(code, 0);
    let (code, out, _) = htl(&["twistor", "--input", "-", "--op", "split"], &bundle);
    assert_eq!(code, 0);
    assert_eq!(report(&out)["data"]["splitting"], serde_json::json!([1, -1]));
}

#[test]
fn malformed_input_exits_with_two() {
    let (code, out, err) = htl(&["wfilt", "--input", "-"], "[1, 2");
    assert_eq!((code, out.as_str()), (2, ""));
    assert!(err.starts_with("error:"), "{err}");
    assert_eq!(htl(&["wfilt", "--input", "/nonexistent/file.json"], "").0, 2);
    assert_eq!(htl(&["compat", "--input", "-", "--mode", "nope"], TENSOR_PAIR).0, 2);
}

#[test]
fn non_nilpotent_is_a_precondition_error() {
    let (code, _, err) = htl(&["wfilt", "--input", "-"], r#"{"rows":1,"cols":1,"entries":[["1"]]}"#);
    assert_eq!(code, 3);
    assert!(err.contains("not nilpotent"), "{err}");
}

#[test]
fn same_seed_gives_identical_bytes() {
    let args = ["compat", "--input", "-", "--mode", "strong", "--seed", "11"];
    let a = htl(&args, TENSOR_PAIR);
    let b = htl(&args, TENSOR_PAIR);
    assert_eq!(a, b);
    let mut child = Command::new(env!("CARGO_BIN_EXE_htl"))
        .args(["compat", "--input", "-", "--mode", "strong"])
        .env("HTL_SEED", "11")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(TENSOR_PAIR.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(report(&String::from_utf8(out.stdout).unwrap())["verdicts"], report(&a.1)["verdicts"]);
}

#[test]
fn timings_are_opt_in() {
    let (_, plain, _) = htl(&["wfilt", "--input", "-"], J2);
    assert!(report(&plain).get("timings").is_none());
    let (_, timed, _) = htl(&["wfilt", "--input", "-", "--timings"], J2);
    assert!(report(&timed)["timings"]["total_ms"].is_number());
}

#[test]
fn human_output_is_not_json() {
    let (code, out, _) = htl(&["wfilt", "--input", "-", "--human"], J2);
    assert_eq!(code, 0);
    assert!(serde_json::from_str::<Value>(&out).is_err());
    assert!(out.contains("weight_axioms"), "{out}");
}

#[test]
fn mod2_at_nonzero_parameter_is_trivial() {
    let (_, bundle, _) = htl(&["model", "--name", "mod2", "--args", "p=3"], "");
    let (code, out, _) = htl(&["twistor", "--input", "-", "--op", "split"], &bundle);
    assert_eq!(code, 0);
    assert_eq!(report(&out)["data"]["splitting"], serde_json::json!([0, 0]));
}

#[test]
fn h0_of_trivial_bundle_is_rank() {
    let trivial = r#"{"rank":3,"gluing":{"rows":3,"cols":3,"entries":[[{"0":"1"},{},{}],[{},{"0":"1"},{}],[{},{},{"0":"1"}]]}}"#;
    let (code, out, _) = htl(&["twistor", "--input", "-", "--op", "h0", "--twist", "0"], trivial);
    assert_eq!(code, 0, "{out}");
    assert_eq!(report(&out)["data"]["h0"], 3);
}

#[test]
fn pairs_report_vanishing_top_cohomology() {
    let (_, out, _) = htl(&["purity", "--input", "-"], TENSOR_PAIR);
    let r = report(&out);
    let top = r["verdicts"].as_array().unwrap().iter().find(|v| v["check"] == "top_cohomology_vanishes").unwrap().clone();
    assert_eq!(top["pass"], true);
    let base = r["verdicts"].clone();
    let (_, out, _) = htl(&["purity", "--input", "-", "--reindex", "kk", "--weight", "0"], TENSOR_PAIR);
    assert_eq!(report(&out)["verdicts"], base);
}

#[test]
fn single_map_passes_every_mode() {
    for mode in ["seq", "strong", "hodge", "bottom"] {
        assert_eq!(htl(&["compat", "--input", "-", "--mode", mode], J2).0, 0, "{mode}");
    }
}
