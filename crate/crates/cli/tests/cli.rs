use std::path::PathBuf;
use std::process::Command;

use pomalg::fixtures::strong_gap_pomonoid;
use pomalg_cli::report::digest;
use pomalg_cli::structure::{parse, serialize, ParseErrorKind};
use serde_json::Value;

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "data", name].iter().collect();
    p.display().to_string()
}

fn run(args: &[&str]) -> i32 {
    let mut v = vec!["pomalg".to_string()];
    v.extend(args.iter().map(|s| s.to_string()));
    pomalg_cli::run(&v)
}

/// Runs with `--json` and returns the exit code and the report.
fn run_json(args: &[&str]) -> (i32, Value) {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let mut all: Vec<&str> = args.to_vec();
    let out_s = out.display().to_string();
    all.extend(["--json", &out_s]);
    let code = run(&all);
    let report = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    (code, report)
}

#[test]
fn fixture_file_matches_the_built_in_fixture() {
    let text = std::fs::read_to_string(data("fixture.pom")).unwrap();
    let file = parse(&text).unwrap();
    assert_eq!(**file.pomonoid("S").unwrap(), strong_gap_pomonoid());
    let amalgam = &file.amalgam("A").unwrap().amalgam;
    assert_eq!(amalgam.core().len(), 3);
}

#[test]
fn duplicate_element_is_a_syntax_error() {
    let e = parse("pomonoid P\n  elements 1 x x\nend\n").unwrap_err();
    assert_eq!((e.kind, e.line, e.column), (ParseErrorKind::Syntax, 2, 16));
}

#[test]
fn unknown_order_element_is_unresolved() {
    let text = "pomonoid P\n  elements 1\n  table\n    1\n  order 1 <= q\nend\n";
    let e = parse(text).unwrap_err();
    assert_eq!((e.kind, e.line, e.column), (ParseErrorKind::Unresolved, 5, 14));
}

#[test]
fn unknown_reference_is_unresolved() {
    let e = parse("sposet X over Nope side right\nend\n").unwrap_err();
    assert_eq!(e.kind, ParseErrorKind::Unresolved);
    assert_eq!(e.line, 1);
}

#[test]
fn invalid_table_is_a_validation_error() {
    let text = "pomonoid P\n  elements 1 x\n  table\n    1 x\n    x 1\n  order 1 <= x\nend\n";
    let e = parse(text).unwrap_err();
    assert_eq!(e.kind, ParseErrorKind::Validation);
}

#[test]
fn missing_end_is_reported() {
    let e = parse("pomonoid P\n  elements 1\n  table\n    1\n").unwrap_err();
    assert_eq!(e.kind, ParseErrorKind::Syntax);
    assert!(e.message.contains("no `end`"), "{}", e.message);
}

#[test]
fn operators_need_no_surrounding_spaces() {
    let text = "pomonoid P\n  elements 1 z\n  table\n    1 z\n    z z\n  order 1<=z\nend\nmap m:P->P\n  1->1,z->z\nend\n";
    let file = parse(text).unwrap();
    assert!(file.pomonoid("P").unwrap().leq(0, 1));
    assert_eq!(file.map("m").unwrap().assignment(), &[0, 1]);
}

#[test]
fn serialization_round_trips() {
    for name in ["fixture.pom", "acts.pom", "poext.pom"] {
        let text = std::fs::read_to_string(data(name)).unwrap();
        let first = parse(&text).unwrap();
        let printed = serialize(&first);
        let second = parse(&printed).unwrap();
        assert_eq!(serialize(&second), printed, "{name}");
        for ((n1, p1), (n2, p2)) in first.pomonoids.iter().zip(&second.pomonoids) {
            assert_eq!(n1, n2);
            assert_eq!(p1, p2);
        }
        for ((n1, d1), (n2, d2)) in first.sposets.iter().zip(&second.sposets) {
            assert_eq!(n1, n2);
            assert_eq!(d1.sposet.poset(), d2.sposet.poset());
            assert_eq!(d1.sposet.right().map(|a| a.table().to_vec()), d2.sposet.right().map(|a| a.table().to_vec()));
            assert_eq!(d1.sposet.left().map(|a| a.table().to_vec()), d2.sposet.left().map(|a| a.table().to_vec()));
        }
        for ((n1, m1), (n2, m2)) in first.maps.iter().zip(&second.maps) {
            assert_eq!(n1, n2);
            assert_eq!(m1.assignment(), m2.assignment());
        }
    }
}

#[test]
fn unitary_reports_the_fixture_verdicts() {
    let (code, r) = run_json(&["unitary", "--sub", "U", "--in", "S", &data("fixture.pom"), "--verify"]);
    assert_eq!(code, 0);
    let right = &r["result"]["right"];
    assert_eq!(right["unitary"], true);
    assert_eq!(right["pounitary"], true);
    assert_eq!(right["upper_strong"], false);
    assert_eq!(right["lower_strong"], false);
    let has = |list: &Value, t: &str| list.as_array().unwrap().iter().any(|x| x == t);
    assert!(has(&right["upper_witnesses"], "(1, b, e)"));
    assert!(has(&right["lower_witnesses"], "(1, a, e)"));
    assert!(r["verification"]["failures"].as_array().unwrap().is_empty());
}

#[test]
fn word_le_finds_a_single_order_step() {
    let (code, r) = run_json(&["word-le", "--amalgam", "A", "--lhs", "1:e", "--rhs", "1:b", "--depth", "2", &data("fixture.pom"), "--verify"]);
    assert_eq!(code, 0);
    let trace = r["result"]["trace"].as_array().unwrap();
    assert_eq!(trace.len(), 1);
    assert_eq!(trace[0]["kind"], "O");
    assert_eq!(r["verification"]["replayed"], 1);
}

#[test]
fn word_le_without_a_derivation_is_unknown() {
    let (code, r) = run_json(&["word-le", "--amalgam", "A", "--lhs", "1:b", "--rhs", "1:e", "--depth", "2", &data("fixture.pom")]);
    assert_eq!(code, 3);
    assert_eq!(r["scope"], "unknown");
}

#[test]
fn tall_tower_trips_the_size_guard() {
    let (code, r) = run_json(&["tower", "--amalgam", "A", "--tower", "99", &data("fixture.pom")]);
    assert_eq!(code, 2);
    assert!(r["error"].as_str().unwrap().contains("size guard"));
}

#[test]
fn failing_poextension_exits_with_a_replayed_witness() {
    let (code, r) = run_json(&["poext", "--sub", "U", "--in", "S", &data("poext.pom"), "--size-cap", "2", "--verify"]);
    assert_eq!(code, 1);
    assert_eq!(r["result"]["holds"], false);
    assert!(r["verification"]["failures"].as_array().unwrap().is_empty());
    assert_eq!(r["verification"]["replayed"], 1);
}

#[test]
fn exit_codes_on_the_golden_files() {
    let fixture = data("fixture.pom");
    let acts = data("acts.pom");
    let cases: Vec<(Vec<&str>, i32)> = vec![
        (vec!["validate", &fixture], 0),
        (vec!["validate", &acts], 0),
        (vec!["amalgam", "--amalgam", "A", &fixture], 0),
        (vec!["tower", "--amalgam", "A", &fixture], 0),
        (vec!["poext", "--sub", "U", "--in", "S", &fixture], 0),
        (vec!["tensor", "--left", "A", "--right", "B", &acts, "--verify"], 0),
        (vec!["quotient", "--sposet", "A", "--pairs", "q <= p", &acts, "--verify"], 0),
        (vec!["pushout", "--f", "f", "--g", "g", &acts, "--verify"], 0),
        (vec!["free-ext", "--sub", "j", "--in", "M", "--x", "A", "--y", "Y", "--map", "h", &acts], 0),
        (vec!["unitary", "--map", "f", &acts, "--verify"], 0),
        (vec!["gcomplete", "--pomonoid", "Z3", &acts], 0),
        (vec!["gcomplete", "--pomonoid", "M", &acts], 1),
        (vec!["commutative-amalgam", "--amalgam", "C", &acts], 0),
        (vec!["experiment-open-problem", "--size-cap", "2"], 0),
        (vec!["validate", "no-such-file.pom"], 2),
        (vec!["tensor", "--left", "B", "--right", "A", &acts], 2),
        (vec!["unitary", &fixture], 2),
    ];
    for (args, expected) in cases {
        assert_eq!(run(&args), expected, "{args:?}");
    }
}

#[test]
fn reports_carry_the_schema_and_input_digest() {
    let path = data("acts.pom");
    let (code, r) = run_json(&["validate", &path, "--seed", "17"]);
    assert_eq!(code, 0);
    assert_eq!(r["schema"], 1);
    assert_eq!(r["exit_code"], 0);
    assert_eq!(r["seed"], 17);
    assert_eq!(r["input"]["sha256"], digest(&std::fs::read(&path).unwrap()));
    assert!(r["wall_time_ms"].as_f64().unwrap() >= 0.0);
}

#[test]
fn tensor_verification_replays_every_scheme() {
    let (code, r) = run_json(&["tensor", "--left", "A", "--right", "B", &data("acts.pom"), "--verify"]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["classes"].as_array().unwrap().len(), 2);
    assert!(r["verification"]["replayed"].as_u64().unwrap() > 0);
    assert!(r["verification"]["failures"].as_array().unwrap().is_empty());
}

#[test]
fn dot_output_draws_the_result() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t.dot");
    let code = run(&["tensor", "--left", "A", "--right", "B", &data("acts.pom"), "--dot", &out.display().to_string()]);
    assert_eq!(code, 0);
    let dot = std::fs::read_to_string(out).unwrap();
    assert!(dot.starts_with("digraph"));
    assert!(dot.contains("\"p⊗x\" -> \"p⊗y\""));
}

#[test]
fn binary_honours_the_cell_guard_variable() {
    let bin = env!("CARGO_BIN_EXE_pomalg");
    let status = Command::new(bin)
        .args(["tower", "--amalgam", "A", "--tower", "3", &data("fixture.pom")])
        .env("POMALG_MAX_CELLS", "20")
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&status.stderr).contains("size guard"));
    let ok = Command::new(bin).args(["tower", "--amalgam", "A", "--tower", "3", &data("fixture.pom")]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
}
