use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use jsonschema::{Draft, JSONSchema};
use ncdiff::builtins;
use ncdiff::derivations::{field_space, FieldValuedForm};
use ncdiff::forms::Omega;
use ncdiff::schouten::MultiMap;
use serde_json::Value;

fn ncdiff(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ncdiff")).args(args).output().expect("binary runs")
}

fn schema() -> JSONSchema {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../schema/report.schema.json");
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    JSONSchema::options().with_draft(Draft::Draft202012).compile(&doc).expect("schema compiles")
}

fn tmp(name: &str, contents: &str) -> PathBuf {
    let p = Path::new(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&p, contents).unwrap();
    p
}

fn json_of(args: &[&str]) -> Value {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let out = ncdiff(&full);
    assert!(out.status.code().is_some_and(|c| c <= 1), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let s = schema();
    if let Err(errors) = s.validate(&v) {
        let msgs: Vec<String> = errors.map(|e| format!("{} at {}", e, e.instance_path)).collect();
        panic!("{args:?} does not match the schema: {msgs:?}");
    }
    v
}

#[test]
fn every_command_matches_the_schema() {
    let om = Omega::new(builtins::truncpoly(3));
    let x = field_space(&om).unwrap().remove(0);
    let id = FieldValuedForm::identity(&om);
    let k = tmp("x.json", &serde_json::to_string(&x.to_json(&om)).unwrap());
    let l = tmp("id.json", &serde_json::to_string(&id.to_json(&om)).unwrap());
    let (k, l) = (k.to_str().unwrap(), l.to_str().unwrap());
    let mu = MultiMap::commutator(&builtins::upper(2));
    let mu = tmp("mu.json", &serde_json::to_string(&mu.to_json()).unwrap());
    let mu = mu.to_str().unwrap();
    for b in ["dual", "upper(2)"] {
        for cmd in ["info", "derham", "kernel-mu-n", "curvature", "bianchi", "connection-check", "hochschild"] {
            let v = json_of(&[cmd, "--builtin", b]);
            assert_eq!(v["command"], cmd);
            assert_eq!(v["algebra"], b);
        }
        json_of(&["hochschild", "--builtin", b, "--module", "free", "-n", "1"]);
        json_of(&["connection-check", "--builtin", b, "--base", "center"]);
        json_of(&["connection-check", "--builtin", b, "--base", "scalars"]);
        json_of(&["poisson-check", "--builtin", b, "--scan", "1"]);
        json_of(&["verify", "--builtin", b, "--trials", "2"]);
    }
    json_of(&["fn-bracket", "--builtin", "truncpoly(3)", "--left", k, "--right", l]);
    json_of(&["alg-bracket", "--builtin", "truncpoly(3)", "--left", l, "--right", l]);
    let v = json_of(&["nr-bracket", "--builtin", "upper(2)", "--left", mu, "--right", mu]);
    assert_eq!(v["result"]["arity"], 3);
}

#[test]
fn schema_rejects_a_broken_envelope() {
    let mut v = json_of(&["info", "--builtin", "dual"]);
    v["schema_version"] = Value::from(2);
    assert!(!schema().is_valid(&v));
    let mut v = json_of(&["info", "--builtin", "dual"]);
    v["result"]["omega_dims"] = Value::from("three");
    assert!(!schema().is_valid(&v));
}

#[test]
fn info_reports_form_dimensions() {
    let v = json_of(&["info", "--builtin", "matrix(2)", "-N", "3"]);
    assert_eq!(v["result"]["omega_dims"], serde_json::json!([4, 12, 36, 108]));
    assert_eq!(v["result"]["der_dim"], 3);
    assert_eq!(v["holds"], true);
}

#[test]
fn text_format_has_header_and_verdict() {
    let out = ncdiff(&["hochschild", "--builtin", "dual"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("hochschild on dual (dim 2, N = 2, seed 0)"), "{text}");
    assert!(text.trim_end().ends_with("result: holds"), "{text}");
}

#[test]
fn file_input_matches_builtin() {
    let path = tmp("dual.alg", "algebra dual { basis 1, e; e*e = 0; }\n");
    let from_file = json_of(&["hochschild", "--file", path.to_str().unwrap()]);
    let builtin = json_of(&["hochschild", "--builtin", "dual"]);
    assert_eq!(from_file["result"], builtin["result"]);
}

#[test]
fn product_map_is_not_poisson() {
    let mu = MultiMap::product(&builtins::dual());
    let path = tmp("product.json", &serde_json::to_string(&mu.to_json()).unwrap());
    let out = ncdiff(&["poisson-check", "--builtin", "dual", "--mu", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("failed: "));
}

#[test]
fn bad_input_exits_two() {
    let cases: Vec<Vec<String>> = vec![
        vec!["info".into(), "--builtin".into(), "matrix(0)".into()],
        vec!["info".into(), "--builtin".into(), "dual".into(), "-N".into(), "0".into()],
        vec!["info".into(), "--file".into(), "/nonexistent/a.alg".into()],
        vec!["info".into(), "--file".into(), tmp("syntax.alg", "algebra { basis 1, e").display().to_string()],
        vec![
            "fn-bracket".into(),
            "--builtin".into(),
            "dual".into(),
            "--left".into(),
            tmp("junk.json", "[1,").display().to_string(),
            "--right".into(),
            "x".into(),
        ],
        vec!["info".into()],
    ];
    for args in cases {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let out = ncdiff(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn corrupted_table_names_the_failure() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/corrupted.alg");
    let out = ncdiff(&["info", "--file", path]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("associativity fails"), "{err}");
}

#[test]
fn seeds_change_samples_but_not_verdicts() {
    let a = json_of(&["verify", "--builtin", "dual", "--trials", "3", "--seed", "1"]);
    let b = json_of(&["verify", "--builtin", "dual", "--trials", "3", "--seed", "2"]);
    assert_eq!(a["result"]["all_pass"], true);
    assert_eq!(b["result"]["all_pass"], true);
    assert_eq!(a["seed"], 1);
    assert_eq!(b["seed"], 2);
}
