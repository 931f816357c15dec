use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

use schrograph::corpus::Manifest;
use schrograph::spec::semantic_content;
use schrograph::SpecDocument;

const BIN: &str = env!("CARGO_BIN_EXE_schrograph");

fn path(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join(rel)
}

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().unwrap()
}

fn run_spec(text: &str, args: &[&str]) -> Output {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("g.json");
    std::fs::write(&file, text).unwrap();
    let mut all: Vec<&str> = args.to_vec();
    let f = file.display().to_string();
    all.extend(["--spec", &f]);
    run(&all)
}

fn error_code(out: &Output) -> String {
    let v: Value = serde_json::from_slice(&out.stderr).unwrap_or_else(|_| panic!("stderr: {}", String::from_utf8_lossy(&out.stderr)));
    v["code"].as_str().unwrap().to_string()
}

fn round_trip(doc: &SpecDocument) {
    let op = doc.build().unwrap();
    let back = SpecDocument::from_operator(&op);
    let again = SpecDocument::from_json(&back.to_json(), "round trip").unwrap();
    assert_eq!(semantic_content(doc).unwrap(), semantic_content(&again).unwrap());
    assert_eq!(again.build().unwrap(), op);
}

#[test]
fn shipped_specs_round_trip() {
    for name in ["star3", "line", "delta_w2", "cycle4_opposite", "edge_theta"] {
        let p = path(&format!("specs/{name}.json"));
        let doc = SpecDocument::from_json(&std::fs::read_to_string(&p).unwrap(), name).unwrap();
        round_trip(&doc);
    }
}

#[test]
fn corpus_instances_round_trip() {
    let m = Manifest::load(&path("corpus/manifest.json")).unwrap();
    for inst in m.instances("main").unwrap().iter().step_by(7) {
        let doc = SpecDocument::from_operator(&inst.op);
        let parsed = SpecDocument::from_json(&doc.to_json(), "corpus").unwrap();
        assert_eq!(parsed.build().unwrap(), inst.op, "{} seed {}", inst.group, inst.seed);
    }
}

const PARALLEL: &str = r#"{
  "flavor": "V",
  "base": {"vertices": ["a", "b"], "edges": [["a", "b"], ["a", "b"]]},
  "tails": [{"nest": "a"}, {"nest": "b"}],
  "n0": 2,
  "potential": {"a": 0.25, "1:2": -1.0},
  "coupling": {"e1": 1.5, "a~1:1": 0.5}
}"#;

#[test]
fn parallel_edges_round_trip() {
    let doc = SpecDocument::from_json(PARALLEL, "parallel").unwrap();
    round_trip(&doc);
    let text = SpecDocument::from_operator(&doc.build().unwrap()).to_json();
    assert!(text.contains("\"e1\""), "{text}");
}

#[test]
fn pair_key_sets_every_parallel_edge() {
    let both = PARALLEL.replace(r#""e1": 1.5"#, r#""a~b": 1.5"#);
    let one = PARALLEL.replace(r#""e1": 1.5"#, r#""e0": 1.5, "e1": 1.5"#);
    let a = SpecDocument::from_json(&both, "both").unwrap().build().unwrap();
    let b = SpecDocument::from_json(&one, "one").unwrap().build().unwrap();
    assert_eq!(a, b);
}

#[test]
fn duplicate_key_is_rejected() {
    let text = PARALLEL.replace(r#""e1": 1.5"#, r#""a~b": 1.5, "e0": 2.0"#);
    let out = run_spec(&text, &["validate"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_code(&out), "E_DUPLICATE_KEY");
}

#[test]
fn bad_keys_are_rejected() {
    for (from, to) in [(r#""a": 0.25"#, r#""c": 0.25"#), (r#""1:2""#, r#""0:2""#), (r#""a~1:1""#, r#""b~1:1""#)] {
        let out = run_spec(&PARALLEL.replace(from, to), &["validate"]);
        assert_eq!(out.status.code(), Some(2), "{to}");
        assert_eq!(error_code(&out), "E_BAD_KEY", "{to}");
    }
    let named = PARALLEL.replace(r#"["a", "b"], "edges""#, r#"["a", "b:c"], "edges""#);
    assert_eq!(error_code(&run_spec(&named, &["validate"])), "E_BAD_KEY");
}

#[test]
fn end_vertex_is_rejected() {
    let out = run(&["validate", "--spec", path("specs/bad_end.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_code(&out), "E_END_VERTEX");
    assert!(out.stdout.is_empty());
}

#[test]
fn unknown_field_is_a_parse_error() {
    let out = run_spec(&PARALLEL.replace(r#""flavor""#, r#""colour": 1, "flavor""#), &["validate"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_code(&out), "E_PARSE");
}

#[test]
fn missing_file_is_an_io_error() {
    let out = run(&["validate", "--spec", "/nonexistent/g.json"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(error_code(&out), "E_IO");
}

#[test]
fn usage_errors() {
    let line = path("specs/line.json").display().to_string();
    let out = run(&["scattering", "--spec", &line]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_code(&out), "E_USAGE");
    let out = run(&["validate", "--spec", &line, "--format", "csv"]);
    assert_eq!(error_code(&out), "E_USAGE");
}

#[test]
fn validate_reports_counts() {
    let out = run(&["validate", "--spec", path("specs/edge_theta.json").to_str().unwrap()]);
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["flavor"], "E");
    assert_eq!(v["base_edges"], 3);
    assert_eq!(v["tails"], 2);
    assert_eq!(v["potential_overrides"], 3);
    assert_eq!(v["coupling_overrides"], 3);
}

#[test]
fn sweep_csv_layout() {
    let out = run(&[
        "sweep",
        "--spec",
        path("specs/line.json").to_str().unwrap(),
        "--lambda-min",
        "1.5",
        "--lambda-max",
        "2.5",
        "--step",
        "0.5",
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "lambda,band,solution_dim,detector,intersection_dim,unitarity_residual,s_1_1_re,s_1_1_im,s_1_2_re,s_1_2_im,s_2_1_re,s_2_1_im,s_2_2_re,s_2_2_im"
    );
    assert_eq!(lines.len(), 4);
    let bands: Vec<&str> = lines[1..].iter().map(|l| l.split(',').nth(1).unwrap()).collect();
    assert_eq!(bands, ["inside", "edge", "outside"]);
    assert!(lines[1].starts_with("1.5000000000000000e0,"));
}

#[test]
fn out_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("r.json");
    let star = path("specs/star3.json").display().to_string();
    let a = run(&["scattering", "--spec", &star, "--lambda", "0.5"]);
    let b = run(&["scattering", "--spec", &star, "--lambda", "0.5", "--out", file.to_str().unwrap()]);
    assert!(a.status.success() && b.status.success());
    assert!(b.stdout.is_empty());
    assert_eq!(std::fs::read(&file).unwrap(), a.stdout);
}
