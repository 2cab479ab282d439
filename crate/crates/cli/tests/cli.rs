use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

const CARTAN: &str = r#"{"solved": {"r": "t^3/3", "s": "t^2/2"}, "parameter": "t"}"#;
const TYPE_IV: &str = r#"{"solved": {"r": "q", "s": "0"}, "parameter": "t"}"#;
const POINT: &str = r#"{"x": 1, "y": 2, "z": 0, "p": 1, "q": "1/2", "t": 3}"#;

fn write(name: &str, text: &str) -> PathBuf {
    let p = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn eds(args: &[&str]) -> Output {
    eds_env(args, &[])
}

fn eds_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut c = Command::new(env!("CARGO_BIN_EXE_eds"));
    c.args(args).env_remove("EDS_MAX_DEPTH");
    for (k, v) in env {
        c.env(k, v);
    }
    c.output().unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

#[test]
fn classify_cartan_is_type_i() {
    let sys = write("cartan_classify.json", CARTAN);
    let o = eds(&["classify", "--system", sys.to_str().unwrap(), "--points", POINT, "--verify"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    assert_eq!(v["results"][0]["report"]["type"], "I");
    assert_eq!(v["results"][0]["report"]["kernel_dim"], 2);
}

#[test]
fn degenerate_point_exits_one() {
    let sys = write("iv_classify.json", TYPE_IV);
    let pt = r#"{"x": 1, "y": 2, "z": 0, "p": 1, "q": "1/2", "t": 0}"#;
    let o = eds(&["classify", "--system", sys.to_str().unwrap(), "--points", pt]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("degenerate"));
}

#[test]
fn malformed_input_exits_two() {
    let bad = write("bad.json", "{\"solved\": ");
    let o = eds(&["classify", "--system", bad.to_str().unwrap(), "--points", POINT]);
    assert_eq!(o.status.code(), Some(2));
    let sys = write("cartan_badpoint.json", CARTAN);
    let o = eds(&["classify", "--system", sys.to_str().unwrap(), "--points", "[1, 2]"]);
    assert_eq!(o.status.code(), Some(2));
    let o = eds(&["cartan", "solve", "--method", "i", "--y0", "t^"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    let sys = write("cartan_det.json", CARTAN);
    let args = ["prolong", "--system", sys.to_str().unwrap(), "--points", POINT, "--depth", "2"];
    let a = eds(&args);
    let b = eds(&args);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn depth_is_capped() {
    let sys = write("cartan_depth.json", CARTAN);
    let s = sys.to_str().unwrap();
    let o = eds(&["prolong", "--system", s, "--points", POINT, "--depth", "4"]);
    assert_eq!(o.status.code(), Some(2));
    let o = eds(&["prolong", "--system", s, "--points", POINT, "--depth", "0"]);
    assert_eq!(o.status.code(), Some(2));
    let o = eds_env(&["prolong", "--system", s, "--points", POINT, "--depth", "2"], &[("EDS_MAX_DEPTH", "1")]);
    assert_eq!(o.status.code(), Some(2));
    let o = eds_env(&["prolong", "--system", s, "--points", POINT, "--depth", "1"], &[("EDS_MAX_DEPTH", "x")]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn cartan_solutions_verify() {
    let o = eds(&["cartan", "solve", "--method", "i", "--y0", "t^3 + 2*t^2", "--verify"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let o = eds(&["cartan", "solve", "--method", "ii", "--phi", "tau^4", "--verify"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let o = eds(&["cartan", "compare", "--y0", "t^4 - t^2", "--verify"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stdout).contains("true"));
    let o = eds(&["cartan", "solve", "--method", "ii"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn symbol_matches_models() {
    for (chart, pt) in [("sigma0", r#"{"x": 1, "y": 0, "z": 2, "p": 1, "q": 0, "t": 1}"#), ("sigma1", r#"{"x": 1, "y": 0, "z": 2, "p": 1, "q": 0, "t": 1}"#)] {
        let o = eds(&["symbol", "--chart", chart, "--point", pt, "--verify"]);
        assert_eq!(o.status.code(), Some(0), "{chart}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn cauchy_growth_and_report() {
    let sys = write("cartan_misc.json", CARTAN);
    let s = sys.to_str().unwrap();
    for args in [
        vec!["cauchy", "--system", s, "--verify"],
        vec!["growth", "--system", s, "--points", POINT, "--verify"],
        vec!["fiber", "--system", s, "--points", POINT, "--verify"],
        vec!["cartan", "report", "--verify"],
    ] {
        let o = eds(&args);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        json(&o);
    }
}
