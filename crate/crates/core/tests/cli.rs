use std::path::Path;

use serde_json::Value;

use reflekt::cli::{load_category, main_with_args, parse_crep, write_crep};
use reflekt::field::PrimeField;
use reflekt::homotopy::{reflect_minus, ReflectionData};
use reflekt::random::{instance_rng, random_complex};

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = main_with_args(std::iter::once("reflekt").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let (code, out, _) = run(&full);
    (code, serde_json::from_str(&out).unwrap_or_else(|e| panic!("{e}: {out}")))
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

const A3: &str = "objects: y1 y2 y3\narrows:\n  f: y1 -> y2\n  g: y2 -> y3\n";

#[test]
fn build_plus_cone() {
    let dir = tempfile::tempdir().unwrap();
    let cat = write(dir.path(), "c.cat", A3);
    let out = dir.path().join("cplus.cat");
    let (code, v) = json(&["build", "--construct", "c-plus", "--input", &cat, "--objects", "y1,y2", "--output", out.to_str().unwrap()]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["schema"], "reflekt/1");
    assert_eq!(v["outcome"], "pass");
    // 6 morphisms of C, the apex identity, and 1 + 2 legs
    assert_eq!(v["payload"]["morphisms"], 10);
    assert_eq!(v["payload"]["objects"].as_array().unwrap().len(), 4);
    let written = load_category(&std::fs::read_to_string(&out).unwrap(), 64).unwrap();
    assert_eq!(written.num_morphisms(), 10);
}

#[test]
fn reflect_matches_the_library() {
    let dir = tempfile::tempdir().unwrap();
    let cat = write(dir.path(), "c.cat", A3);
    let c = load_category(A3, 64).unwrap();
    let ys = vec![c.object("y2").unwrap()];
    let rd = ReflectionData::new(&c, &ys).unwrap();
    let f = PrimeField::new(5).unwrap();
    let x = random_complex(&rd.minus.cat, &f, -1, 1, 2, &mut instance_rng(3, 0)).unwrap();
    let rep = write(dir.path(), "x.crep", &write_crep(&x));
    let out = dir.path().join("y.crep");
    let (code, v) = json(&["reflect", "--dir", "minus", "--cat", &cat, "--objects", "y2", "--rep", &rep, "--output", out.to_str().unwrap()]);
    assert_eq!(code, 0, "{v}");
    let expected = reflect_minus(&c, &ys, &x).unwrap();
    let got = parse_crep(&std::fs::read_to_string(&out).unwrap(), &rd.plus.cat, &f).unwrap();
    assert_eq!(got, expected);
    assert_eq!(v["payload"]["crep"], write_crep(&expected));
}

#[test]
fn suite_check_is_deterministic() {
    let args = ["check", "--suite", "roundtrip", "--seed", "7", "--count", "200"];
    let (code, first) = json(&args);
    assert_eq!(code, 0, "{first}");
    assert_eq!(first["outcome"], "pass");
    let records = first["payload"]["records"].as_array().unwrap();
    assert!(records.len() >= 200);
    assert!(records.iter().all(|r| r["digest"].as_str().is_some_and(|d| !d.is_empty())));
    let (_, a, _) = run(&["--format", "json", "check", "--suite", "clock", "--seed", "1"]);
    let (_, b, _) = run(&["--format", "json", "check", "--suite", "clock", "--seed", "1"]);
    assert_eq!(a, b);
    let (_, again) = json(&args);
    assert_eq!(again, first);
}

#[test]
fn text_output_names_the_verb() {
    let (code, out, _) = run(&["check", "--suite", "r-table"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("reflekt check: pass\n"), "{out}");
    assert!(out.contains("elapsed: "));
}

const SHARED: &str = "category W\nobjects: 0 1\narrows:\n  f: 0 -> 1\n\
                      category X\nobjects: z 0 1\narrows:\n  m: z -> 0\n  f: 0 -> 1\n  n: z -> 1\n\
                      category Y\nobjects: 0 1\narrows:\n  f: 0 -> 1\n  k: 0 -> 1\n\
                      functor fx: W -> X\n  obj 0 = 0\n  obj 1 = 1\n  arrow f = f\n\
                      functor fy: W -> Y\n  obj 0 = 0\n  obj 1 = 1\n  arrow f = f\n";

#[test]
fn exit_codes_follow_the_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let span = write(dir.path(), "s.span", SHARED);
    let (code, v) = json(&["check", "--span", &span, "--word", "X:f", "--word", "Y:f"]);
    assert_eq!((code, v["outcome"].as_str()), (0, Some("pass")), "{v}");
    let (code, v) = json(&["check", "--span", &span, "--word", "X:f", "--word", "Y:k", "--depth", "4"]);
    assert_eq!((code, v["outcome"].as_str()), (1, Some("fail")), "{v}");
    let (code, v) = json(&["check", "--span", &span, "--word", "X:f.m", "--word", "X:n", "--depth", "4"]);
    assert_eq!((code, v["outcome"].as_str()), (1, Some("fail")), "{v}");
    let (code, v) = json(&["check", "--span", &span, "--word", "X:f.m", "--word", "X:n", "--depth", "1"]);
    assert_eq!((code, v["outcome"].as_str()), (2, Some("unknown")), "{v}");
    assert_eq!(v["payload"]["completeness"], "bounded-search");

    let (code, v) = json(&["check", "--suite", "no-such-suite"]);
    assert_eq!(code, 1);
    assert!(v["payload"]["error"].as_str().unwrap().contains("no-such-suite"));
    let (code, _, err) = run(&["build", "--construct", "nonsense"]);
    assert_eq!(code, 1);
    assert!(!err.is_empty());
    assert_eq!(run(&["--help"]).0, 0);
    assert_eq!(run(&["--version"]).0, 0);
}

#[test]
fn missing_file_is_a_failing_report() {
    let (code, v) = json(&["report", "/nonexistent/x.cat"]);
    assert_eq!(code, 1);
    assert!(v["payload"]["error"].as_str().unwrap().contains("/nonexistent/x.cat"));
}

#[test]
fn field_selection() {
    let (code, v) = json(&["--field", "Q", "check", "--suite", "extension-by-zero", "--count", "5"]);
    assert_eq!(code, 0, "{v}");
    let (code, v) = json(&["--field", "F4", "check", "--suite", "extension-by-zero", "--count", "5"]);
    assert_eq!(code, 1);
    assert!(v["payload"]["error"].is_string());

    let dir = tempfile::tempdir().unwrap();
    let cat = write(dir.path(), "c.cat", "objects: a\n");
    let rep = write(dir.path(), "x.rep", "field F5\ndim a = 1\n");
    let (code, v) = json(&["--field", "F7", "report", &rep, "--cat", &cat]);
    assert_eq!(code, 1);
    assert!(v["payload"]["error"].as_str().unwrap().contains("F5"), "{v}");
    let (code, v) = json(&["--field", "F5", "report", &rep, "--cat", &cat]);
    assert_eq!(code, 0, "{v}");
}

#[test]
fn binary_reads_the_field_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let cat = write(dir.path(), "c.cat", "objects: a\n");
    let rep = write(dir.path(), "x.rep", "field F5\ndim a = 1\n");
    let bin = env!("CARGO_BIN_EXE_reflekt");
    let run_with = |field: &str| {
        std::process::Command::new(bin)
            .args(["--format", "json", "report", &rep, "--cat", &cat])
            .env("REFLEKT_FIELD", field)
            .output()
            .unwrap()
    };
    let ok = run_with("F5");
    assert_eq!(ok.status.code(), Some(0));
    let bad = run_with("F3");
    assert_eq!(bad.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&bad.stdout).unwrap();
    assert!(v["payload"]["error"].as_str().unwrap().contains("F3"));
}
