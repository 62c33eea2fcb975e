use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn cmgrade(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cmgrade")).args(args).output().expect("binary runs")
}

fn script(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("cmgrade-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("json on stdout")
}

#[test]
fn grade_command() {
    let p = script("plane.cm", "ring R = QQ[x,y,z] / (x*y, x*z);\n");
    let o = cmgrade(&["grade", "--input", p.to_str().unwrap(), "--ideal", "(y, z)"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["schema"], "cmgrade-report/1");
    assert_eq!(v["results"][0]["primary"], 0);
}

#[test]
fn cm_check_exit_codes() {
    let p = script("senses.cm", "ring R = QQ[x,y,z] / (x*y, x*z);\nring P = QQ[x,y];\n");
    let path = p.to_str().unwrap();
    let fail = cmgrade(&["cm-check", "--input", path, "--sense", "fg", "--ring", "R"]);
    assert_eq!(fail.status.code(), Some(1));
    assert_eq!(json(&fail)["pass"], false);
    let pass = cmgrade(&["cm-check", "--input", path, "--sense", "fg", "--ring", "P"]);
    assert_eq!(pass.status.code(), Some(0));
    let fam = script("family.txt", "# test ideals\n(x)\n(x, y)\n");
    let with = cmgrade(&["cm-check", "--input", path, "--sense", "fg", "--ring", "P", "--family", fam.to_str().unwrap()]);
    assert_eq!(with.status.code(), Some(0));
}

#[test]
fn errors_exit_two() {
    let p = script("bad.cm", "ring R = GF(4)[x];\n");
    let o = cmgrade(&["run", "--input", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("error"));
    assert_eq!(cmgrade(&["run"]).status.code(), Some(2));
}

#[test]
fn corpus_is_deterministic() {
    let a = cmgrade(&["corpus", "--workers", "1"]);
    let b = cmgrade(&["corpus", "--workers", "2"]);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stdout));
    assert_eq!(a.stdout, b.stdout);
    let list = json(&cmgrade(&["corpus", "--list"]));
    assert!(list["results"].as_array().unwrap().len() >= 19);
}

#[test]
fn json_file_output() {
    let p = script("run.cm", "ring R = QQ[x,y];\ngrade koszul (x, y) expect 2;\nheight (x) expect 1;\n");
    let out = p.with_extension("json");
    let o = cmgrade(&["run", "--input", p.to_str().unwrap(), "--json", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["pass"], true);
    assert_eq!(v["results"].as_array().unwrap().len(), 2);
}
