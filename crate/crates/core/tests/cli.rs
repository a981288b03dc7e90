use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_discrepancy")).args(args).output().unwrap()
}

fn json_ok(args: &[&str]) -> Value {
    let out = cli(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.display().to_string()
}

#[test]
fn disc_and_herdisc_certificates() {
    let dir = tempfile::tempdir().unwrap();
    let row = write(dir.path(), "row.csv", "1,1,1\n");
    let v = json_ok(&["disc", &row, "--colors", "3"]);
    assert_eq!(v["value"], "0");
    assert_eq!(v["coloring"], serde_json::json!([1, 2, 3]));
    assert_eq!(v["budget_used"], "27");

    let v = json_ok(&["herdisc", &row, "--colors", "3"]);
    assert_eq!(v["value"], "2/3");
    assert_eq!(v["subset"].as_array().unwrap().len(), 1);
}

#[test]
fn weighted_certificates() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.json", r#"{"m": 1, "n": 2, "entries": [[1, 1]]}"#);
    let v = json_ok(&["wdisc", &a, "--z", "1/2"]);
    assert_eq!(v["value"], "0");
    let v = json_ok(&["wdisc", &a, "--sup"]);
    assert_eq!(v["value"], "1/2");
    let v = json_ok(&["herwdisc", &a]);
    assert_eq!(v["value"], "1/2");
    assert!(v["subset"].is_array());
}

#[test]
fn round_writes_trace() {
    let dir = tempfile::tempdir().unwrap();
    let h = dir.path().join("h.json");
    json_ok(&["gen", "--family", "complete", "--n", "4", "-o", h.to_str().unwrap()]);
    let trace = dir.path().join("trace.json");
    let h = h.to_str().unwrap();
    let v = json_ok(&["round", h, "--z", "4/9", "--colors", "3", "--trace", trace.to_str().unwrap()]);
    assert_eq!(v["certified"], true);
    let t: Value = serde_json::from_str(&fs::read_to_string(&trace).unwrap()).unwrap();
    assert_eq!(t["length"], 2);
    assert_eq!(t["iterations"].as_array().unwrap().len(), 2);
    assert_eq!(t["final_coloring"].as_array().unwrap().len(), 4);

    let v = json_ok(&["round", h, "--z", "1/2", "--colors", "3", "--ell", "2"]);
    assert_eq!(v["requested_z"], "1/2");
    let v = json_ok(&["round", h, "--z", "1/2", "--colors", "4", "--oracle", "greedy"]);
    assert_eq!(v["certified"], false);

    let refused = cli(&["round", h, "--z", "1/3", "--colors", "4"]);
    assert_eq!(refused.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&refused.stderr).contains("1/2"));
    assert_eq!(cli(&["round", h, "--z", "1/2", "--colors", "3"]).status.code(), Some(2));
}

#[test]
fn gen_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let p1 = dir.path().join("a.json");
    let p2 = dir.path().join("b.json");
    for p in [&p1, &p2] {
        json_ok(&["gen", "--family", "random01", "--m", "3", "--n", "5", "--seed", "9", "-o", p.to_str().unwrap()]);
    }
    assert_eq!(fs::read(&p1).unwrap(), fs::read(&p2).unwrap());
    let v: Value = serde_json::from_slice(&fs::read(&p1).unwrap()).unwrap();
    assert_eq!(v["meta"]["seed"], "9");
}

#[test]
fn verify_exit_codes() {
    let v = json_ok(&["verify", "--corpus", "empty", "--json"]);
    assert_eq!(v, serde_json::json!([]));
    assert!(cli(&["verify", "--corpus", "smoke"]).status.success());
    let corrupted = cli(&["verify", "--corpus", "smoke", "--rhs-scale", "1/10"]);
    assert_eq!(corrupted.status.code(), Some(1));
    assert_eq!(cli(&["verify", "--corpus", "nonsense"]).status.code(), Some(2));
}

#[test]
fn bad_input_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let ragged = write(dir.path(), "bad.csv", "1,2\n3\n");
    assert_eq!(cli(&["disc", &ragged, "--colors", "2"]).status.code(), Some(2));
    let ok = write(dir.path(), "ok.csv", "1,1\n");
    assert_eq!(cli(&["disc", &ok, "--colors", "1"]).status.code(), Some(2));
    let wide = write(dir.path(), "wide.csv", &format!("{}\n", vec!["1"; 30].join(",")));
    let out = cli(&["disc", &wide, "--colors", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).to_lowercase().contains("budget"));
}
