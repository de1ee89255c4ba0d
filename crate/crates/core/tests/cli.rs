mod common;

use std::path::Path;
use std::process::Command;

use common::write_file;
use dgsmooth::cli::Report;
use tempfile::TempDir;

const QX: &str = r#"{"generators":[{"name":"x","degree":2}]}"#;

fn module(relations: &str) -> String {
    format!(r#"{{"ring":{QX},"generators":[{{"name":"e0","degree":0}}],"relations":{relations}}}"#)
}

fn cyclic_algebra(relations: &str) -> String {
    format!(r#"{{"ring":{QX},"generators":[{{"name":"one","degree":0}}],"relations":{relations}}}"#)
}

const FIELD_ALGEBRA: &str = r#"{"generators":[{"name":"one","degree":0}]}"#;
const SL2: &str = r#"{"name":"SL2","levi":[{"type":"A","rank":1}],"central_torus_rank":0,"unipotent_dim":0}"#;
const BOREL: &str = r#"{"name":"B","levi":[],"central_torus_rank":1,"unipotent_dim":1}"#;

fn run(args: &[&str]) -> (i32, String, String) {
    run_env(args, None)
}

fn run_env(args: &[&str], window: Option<&str>) -> (i32, String, String) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_dgsmooth"));
    cmd.args(args).env_remove(dgsmooth::cli::WINDOW_ENV);
    if let Some(wv) = window {
        cmd.env(dgsmooth::cli::WINDOW_ENV, wv);
    }
    let out = cmd.output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn json_report(args: &[&str]) -> (i32, Report) {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let (code, out, err) = run(&full);
    let report: Report = serde_json::from_str(&out).unwrap_or_else(|e| panic!("{e}: {out} {err}"));
    assert_eq!(report.exit_code, code);
    (code, report)
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn resolve_residue_field_and_free_module() {
    let dir = TempDir::new().unwrap();
    let k = write_file(&dir, "k.json", &module(r#"[[{"poly":"x"}]]"#));
    let (code, r) = json_report(&["resolve", "--module", p(&k), "--window", "-2:12"]);
    assert_eq!(code, 0);
    assert_eq!(r.details["projective_dimension"], 1);
    assert_eq!(r.details["derived_fiber"], "{0:1, 1:1}");

    let free = write_file(&dir, "free.json", &module("[]"));
    let (code, r) = json_report(&["resolve", "--module", p(&free)]);
    assert_eq!(code, 0);
    assert_eq!(r.details["projective_dimension"], 0);
}

#[test]
fn malformed_input_exits_64() {
    let dir = TempDir::new().unwrap();
    let bad = write_file(&dir, "bad.json", "{ not json");
    let (code, out, err) = run(&["resolve", "--module", p(&bad)]);
    assert_eq!(code, 64);
    assert!(out.is_empty());
    assert!(err.contains("parse error"), "{err}");
    let e8 = write_file(&dir, "e8.json", r#"{"name":"E8","levi":[{"type":"E","rank":8}]}"#);
    assert_eq!(run(&["equivariant", "--group", p(&e8), "--subgroup", p(&e8)]).0, 64);
}

#[test]
fn check_algebra_exit_codes() {
    let dir = TempDir::new().unwrap();
    let base = write_file(&dir, "base.json", QX);
    let trunc = write_file(&dir, "trunc.json", &cyclic_algebra(r#"["x^2*one"]"#));
    let k = write_file(&dir, "k.json", &cyclic_algebra("[]"));

    let (code, r) = json_report(&["check-algebra", "--algebra", p(&trunc), "--over-field"]);
    assert_eq!(code, 1);
    assert_eq!(r.verdict, "NOT_SMOOTH");
    assert_eq!(r.criterion.as_deref(), Some("field-criterion"));

    let (code, r) = json_report(&["check-algebra", "--base", p(&base), "--algebra", p(&k)]);
    assert_eq!(code, 0);
    assert_eq!(r.criterion.as_deref(), Some("base-ring-criterion"));

    let (code, r) = json_report(&["check-algebra", "--base", p(&base), "--algebra", p(&trunc)]);
    assert_eq!(code, 1);
    assert_eq!(r.details["witness"]["degree"], 4);

    let (code, r) = json_report(&["check-algebra", "--algebra", p(&trunc), "--diagonal-tor", "--max-length", "4"]);
    assert_eq!(code, 2);
    assert_eq!(r.verdict, "UNDECIDED_WITHIN_BOUND");

    let (code, r) = json_report(&["check-algebra", "--algebra", p(&k), "--diagonal-tor"]);
    assert_eq!(code, 0);
    assert_eq!(r.criterion.as_deref(), Some("diagonal-tor"));
}

#[test]
fn hypothesis_violation_is_undecided() {
    let dir = TempDir::new().unwrap();
    let k = write_file(&dir, "k.json", &cyclic_algebra("[]"));
    // K itself has unbounded cohomology, outside the field criterion
    let (code, r) = json_report(&["check-algebra", "--algebra", p(&k), "--over-field"]);
    assert_eq!(code, 2);
    assert_eq!(r.verdict, "HYPOTHESIS_VIOLATED");
}

#[test]
fn window_from_environment() {
    let dir = TempDir::new().unwrap();
    let base = write_file(&dir, "base.json", QX);
    let trunc = write_file(&dir, "trunc.json", &cyclic_algebra(r#"["x^2*one"]"#));
    let args = ["check-algebra", "--base", p(&base), "--algebra", p(&trunc)];
    let (code, _, err) = run_env(&args, Some("0:2"));
    assert_eq!(code, 64, "{err}");
    assert!(err.contains("window too small"));
    assert_eq!(run_env(&args, Some("-4:16")).0, 1);
}

#[test]
fn triangular_examples() {
    let dir = TempDir::new().unwrap();
    let field = write_file(&dir, "q.json", FIELD_ALGEBRA);
    let gens: Vec<String> = (0..5).map(|i| format!(r#"{{"name":"v{i}","degree":0}}"#)).collect();
    let v5 = write_file(&dir, "v5.json", &format!(r#"{{"generators":[{}]}}"#, gens.join(",")));
    let (code, r) = json_report(&["triangular", "--upper", p(&field), "--lower", p(&field), "--connecting", p(&v5)]);
    assert_eq!(code, 0, "{r:?}");
    assert_eq!(r.criterion.as_deref(), Some("triangular-decomposition"));

    let zero = write_file(&dir, "zero.json", "{}");
    let (code, r) = json_report(&["triangular", "--upper", p(&field), "--lower", p(&field), "--connecting", p(&zero)]);
    assert_eq!(code, 0);
    assert_eq!(r.details["components"].as_array().unwrap().len(), 3);

    let point = write_file(&dir, "point.json", &cyclic_algebra(r#"["x*one"]"#));
    let line = write_file(&dir, "line.json", &cyclic_algebra("[]"));
    let n = write_file(&dir, "n.json", r#"{"generators":[{"name":"m","degree":0}],"relations":["x*m"]}"#);
    let (code, r) = json_report(&["triangular", "--upper", p(&point), "--lower", p(&line), "--connecting", p(&n)]);
    assert_eq!(code, 1);
    assert_eq!(r.details["failing_component"], "upper-left");
}

#[test]
fn equivariant_and_variety() {
    let dir = TempDir::new().unwrap();
    let sl2 = write_file(&dir, "sl2.json", SL2);
    let b = write_file(&dir, "b.json", BOREL);
    assert_eq!(json_report(&["equivariant", "--group", p(&sl2), "--subgroup", p(&b)]).0, 1);
    assert_eq!(json_report(&["equivariant", "--group", p(&sl2), "--subgroup", p(&sl2)]).0, 0);

    let p1 = write_file(
        &dir,
        "p1.json",
        &format!(
            r#"{{"group":{BOREL},"orbits":[{{"name":"fixed point","stabilizer":{BOREL}}},
                {{"name":"open cell","stabilizer":{{"name":"T","central_torus_rank":1}},"affine_space":true}}]}}"#
        ),
    );
    let (code, seq) = json_report(&["variety", "--input", p(&p1), "--jobs", "1"]);
    assert_eq!(code, 0);
    assert_eq!(seq.verdict, "G_SMOOTH");
    let (_, par) = json_report(&["variety", "--input", p(&p1), "--jobs", "4"]);
    assert_eq!(seq.details, par.details);

    // a unipotent stabilizer for the open cell contradicts the affine-space flag
    let bad = write_file(
        &dir,
        "bad.json",
        &format!(
            r#"{{"group":{BOREL},"orbits":[{{"name":"open cell","stabilizer":{{"name":"U","unipotent_dim":1}},"affine_space":true}}]}}"#
        ),
    );
    let (code, _, err) = run(&["variety", "--input", p(&bad)]);
    assert_eq!(code, 64);
    assert!(err.contains("inconsistent input"), "{err}");
}

#[test]
fn reports_are_deterministic_and_text_matches_json() {
    let dir = TempDir::new().unwrap();
    let k = write_file(&dir, "k.json", &module(r#"[[{"poly":"x"}]]"#));
    let args = ["resolve", "--module", p(&k), "--window", "-2:10"];
    let (_, mut a) = json_report(&args);
    let (_, mut b) = json_report(&args);
    a.elapsed_ms = 0;
    b.elapsed_ms = 0;
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());

    let (code, text, _) = run(&args);
    assert_eq!(code, 0);
    let without_timing = |s: &str| s.lines().filter(|l| !l.starts_with("elapsed_ms")).collect::<Vec<_>>().join("\n");
    assert_eq!(without_timing(&text), without_timing(&a.to_text()));
}
