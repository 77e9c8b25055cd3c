mod common;

use std::f64::consts::{LN_2, PI};

use common::{polyharm, write_spec};
use serde_json::Value;

const IDENTITY: &str = r#"{"p": 1, "J": 1, "terms": [{"n": 1, "j": 1, "a": [1, 0]}]}"#;
const OPPOSED: &str = r#"{"p": 2, "J": 1, "terms": [{"n": 1, "j": 1, "a": [1, 0]}, {"n": 2, "j": 1, "a": [-1, 0]}]}"#;

fn json_of(out: &std::process::Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn f64_at(v: &Value, key: &str) -> f64 {
    v[key].as_f64().unwrap_or_else(|| panic!("missing {key} in {v}"))
}

#[test]
fn eval_and_derive() {
    let dir = tempfile::tempdir().unwrap();
    let out = polyharm(&["eval", "--builtin", "f2", "--z", "0.5"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert!((json_of(&out)["F"][0].as_f64().unwrap() - 0.65625).abs() < 1e-15);

    let out = polyharm(&["derive", "--builtin", "f2", "--z", "0.5,0"], dir.path());
    let v = json_of(&out);
    assert!((v["F_z"][0].as_f64().unwrap() - 1.6875).abs() < 1e-15);
    assert!((v["F_zbar"][0].as_f64().unwrap() - 0.375).abs() < 1e-15);
}

#[test]
fn geometry_commands() {
    let dir = tempfile::tempdir().unwrap();
    let id = write_spec(dir.path(), "identity.map", IDENTITY);
    let v = json_of(&polyharm(&["length", "--map", &id, "--r", "0.5"], dir.path()));
    assert!((f64_at(&v, "length") - PI).abs() < 1e-12);
    let v = json_of(&polyharm(&["length", "--builtin", "f2"], dir.path()));
    assert!((f64_at(&v, "sup_length") - 6.0 * PI).abs() < 1e-8);
    let v = json_of(&polyharm(&["area", "--builtin", "f2", "--r", "0.5"], dir.path()));
    assert!((f64_at(&v, "area_series") - f64_at(&v, "area_quadrature")).abs() < 1e-12);
    let v = json_of(&polyharm(&["diam", "--builtin", "f2"], dir.path()));
    assert!((f64_at(&v, "diameter") - 6.0).abs() < 1e-9);
}

#[test]
fn landau_from_identity_file() {
    let dir = tempfile::tempdir().unwrap();
    let id = write_spec(dir.path(), "identity.map", IDENTITY);
    let out = polyharm(&["landau", "--mode", "length", "--map", &id], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert!((f64_at(&v, "r_univ") - 0.5).abs() < 1e-9);
    assert!((f64_at(&v, "rho_cover") - (1.0 - LN_2)).abs() < 1e-9);

    let v = json_of(&polyharm(&["landau", "--mode", "example1", "--diam", "2"], dir.path()));
    assert!(f64_at(&v, "r_univ") > 0.0);
    let out = polyharm(&["landau", "--mode", "example1", "--diam", "1e-20"], dir.path());
    assert_eq!(out.status.code(), Some(5));
}

#[test]
fn jmetric_command() {
    let dir = tempfile::tempdir().unwrap();
    let v = json_of(&polyharm(&["jmetric", "--z", "0", "--w", "0.5", "--M", "1"], dir.path()));
    assert!((f64_at(&v, "j") - LN_2).abs() < 1e-15);
    let v = json_of(&polyharm(&["jmetric", "--z", "0.5", "--w", "-0.5"], dir.path()));
    assert!((f64_at(&v, "j") - 3f64.ln()).abs() < 1e-15);
}

#[test]
fn verify_f2_reports_example_constants() {
    let dir = tempfile::tempdir().unwrap();
    let f2 = write_spec(dir.path(), "f2.map", r#"{"builtin": "f2"}"#);
    let out = polyharm(&["verify", "--map", &f2], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let doc = json_of(&out);
    assert!((doc["derived"]["K"].as_f64().unwrap() - 3.0).abs() < 1e-6);
    assert!((doc["derived"]["l1"].as_f64().unwrap() - 6.0 * PI).abs() < 1e-8);
    let length = doc["checks"].as_array().unwrap().iter().find(|c| c["check"] == "length-coefficient-bounds").unwrap();
    for (n, m) in length["margins"].as_array().unwrap().iter().enumerate() {
        assert!((m["slack"].as_f64().unwrap() - (9.0 / (n + 1) as f64 - 1.0)).abs() < 1e-8);
    }
    assert_eq!(doc["verdict"], "pass");
    assert_eq!(doc["settings"]["seed"], 0);
    assert_eq!(doc["spec_digest"].as_str().unwrap().len(), 64);
}

#[test]
fn verify_digest_ignores_spec_spelling() {
    let dir = tempfile::tempdir().unwrap();
    let a = json_of(&polyharm(&["verify", "--builtin", "identity"], dir.path()));
    let id = write_spec(dir.path(), "identity.map", IDENTITY);
    let b = json_of(&polyharm(&["verify", "--map", &id], dir.path()));
    assert_eq!(a["spec_digest"], b["spec_digest"]);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let id = write_spec(dir.path(), "identity.map", IDENTITY);
    let opposed = write_spec(dir.path(), "opposed.map", OPPOSED);
    let code = |args: &[&str]| polyharm(args, dir.path()).status.code();

    assert_eq!(code(&["verify", "--map", &id]), Some(0));
    assert_eq!(code(&["verify", "--map", &id, "--l1", "1.0"]), Some(1));
    assert_eq!(code(&["verify", "--map", &opposed]), Some(2));

    assert_eq!(code(&["schwarz", "--map", &id]), Some(0));
    assert_eq!(code(&["schwarz", "--map", &opposed]), Some(2));
    assert_eq!(code(&["three-circles", "--map", &id, "--r1", "0.3", "--m", "0.09"]), Some(0));
    assert_eq!(code(&["three-circles", "--builtin", "f2", "--r1", "0.3", "--m", "0.5"]), Some(2));
    assert_eq!(code(&["three-circles", "--builtin", "identity", "--kind", "hadamard", "--r1", "0.2", "--r2", "0.9"]), Some(0));
    assert_eq!(code(&["three-circles", "--builtin", "f2", "--kind", "hadamard", "--r1", "0.2", "--r2", "0.9"]), Some(5));

    assert_eq!(code(&["eval", "--z", "0.1"]), Some(3));
    assert_eq!(code(&["bogus"]), Some(3));
    assert_eq!(code(&["verify", "--map", "missing.map"]), Some(4));
    let bad = write_spec(dir.path(), "bad.map", r#"{"p": 1, "J": 1, "terms": [{"n": 2, "j": 1}]}"#);
    assert_eq!(code(&["verify", "--map", &bad]), Some(4));
    assert_eq!(code(&["eval", "--builtin", "nosuch", "--z", "0"]), Some(4));
    assert_eq!(code(&["--help"]), Some(0));
}

#[test]
fn verify_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let run = |seed: &str, name: &str| {
        let out = polyharm(&["verify", "--builtin", "f2", "--seed", seed, "--out", name], dir.path());
        assert_eq!(out.status.code(), Some(0));
        std::fs::read(dir.path().join(name)).unwrap()
    };
    assert_eq!(run("7", "a.json"), run("7", "b.json"));
}

#[test]
fn render_writes_deterministic_svg() {
    let dir = tempfile::tempdir().unwrap();
    let args = |name: &'static str| ["render", "--builtin", "identity", "--rings", "4", "--rays", "8", "--out", name];
    assert_eq!(polyharm(&args("a.svg"), dir.path()).status.code(), Some(0));
    assert_eq!(polyharm(&args("b.svg"), dir.path()).status.code(), Some(0));
    let a = std::fs::read_to_string(dir.path().join("a.svg")).unwrap();
    assert_eq!(a, std::fs::read_to_string(dir.path().join("b.svg")).unwrap());
    assert!(a.starts_with("<svg"));
    assert_eq!(a.matches("<polyline").count(), 4 + 8 + 1);
}

#[test]
fn catalog_lists_and_writes_specs() {
    let dir = tempfile::tempdir().unwrap();
    let out = polyharm(&["catalog"], dir.path());
    let names = String::from_utf8(out.stdout).unwrap();
    assert!(names.lines().any(|l| l == "f1"));

    let out = polyharm(&["catalog", "f1", "--params", r#"{"J": 9}"#, "--expand", "--out", "f1.map"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&polyharm(&["eval", "--map", "f1.map", "--z", "0.3,0.1"], dir.path()));
    let w = json_of(&polyharm(&["eval", "--builtin", "f1", "--params", r#"{"J": 9}"#, "--z", "0.3,0.1"], dir.path()));
    assert_eq!(v["F"], w["F"]);
}
