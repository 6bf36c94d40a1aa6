use std::path::{Path, PathBuf};
use std::process::Command;

use dglp_cli::schema::ProblemFile;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn golden(name: &str) -> String {
    let p = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    std::fs::read_to_string(p).unwrap()
}

fn run(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_dglp"))
        .args(args)
        .current_dir(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures"))
        .output()
        .unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
    )
}

#[test]
fn sl2_brackets_match_golden() {
    let (code, out) = run(&["brackets", "--builtin", "sl2-pair", "--max-arity", "4"]);
    assert_eq!(code, 0);
    assert_eq!(out, golden("sl2_brackets.txt"));
}

#[test]
fn arity_one_prints_only_the_differential() {
    let (code, out) = run(&["brackets", "--builtin", "sl2-pair", "--max-arity", "1"]);
    assert_eq!(code, 0);
    assert!(out.contains("[d_tot on forms]") && out.contains("[R1]"));
    assert!(!out.contains("[R2]") && !out.contains("[recursion check]"));
}

#[test]
fn lift_matches_golden() {
    let dir = tempfile::tempdir().unwrap();
    let lifted = dir.path().join("lifted.json");
    let (code, out) = run(&[
        "lift",
        "lift_nonabelian2.json",
        "--output",
        lifted.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert_eq!(out, golden("lift_nonabelian2.txt"));
    assert_eq!(
        std::fs::read_to_string(&lifted).unwrap(),
        golden("lift_nonabelian2.lifted.json")
    );
}

#[test]
fn lifted_structure_passes_all_checks() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    run(&[
        "lift",
        "lift_nonabelian2.json",
        "--output",
        a.to_str().unwrap(),
    ]);
    run(&[
        "lift",
        "lift_nonabelian2.json",
        "--complement",
        "reverse",
        "--output",
        b.to_str().unwrap(),
    ]);
    let (code, out) = run(&[
        "check",
        a.to_str().unwrap(),
        "--leibniz-n",
        "4",
        "--atiyah",
        "--homotopy",
        b.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("verified = pass"));
}

#[test]
fn splitting_homotopy_matches_golden() {
    let (code, out) = run(&["check", "sl2_pair.json", "--homotopy", "sl2_pair_alt.json"]);
    assert_eq!(code, 0);
    assert_eq!(out, golden("sl2_homotopy.txt"));
}

#[test]
fn broken_jacobi_is_a_validation_failure() {
    let (code, out) = run(&["validate", "broken_jacobi.json"]);
    assert_eq!(code, 1);
    assert!(out.contains("Jacobi identity fails on (a, b, c)"), "{out}");
}

#[test]
fn missing_differential_is_an_input_error() {
    let (code, out) = run(&["validate", "missing_differential.json"]);
    assert_eq!(code, 2);
    assert!(out.contains("modules.V.differentials.0: missing differential for declared degree"));
}

#[test]
fn corrupted_alpha_names_the_generator() {
    let (code, out) = run(&["validate", "corrupted_alpha.json"]);
    assert_eq!(code, 1);
    assert!(
        out.contains("structure equation fails on f (degree 0)"),
        "{out}"
    );
    let (code, _) = run(&["brackets", "corrupted_alpha.json"]);
    assert_eq!(code, 1);
}

#[test]
fn killing_example_reports_a_counterexample() {
    let (code, out) = run(&["check", "--builtin", "sl2-killing", "--leibniz-n", "2"]);
    assert_eq!(code, 1);
    assert!(out.contains("counterexample n = 2: J("), "{out}");
}

#[test]
fn malformed_input_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(fixture("broken_jacobi.json")).unwrap();
    let cases = [
        (
            "version.json",
            text.replace("\"schema_version\": 1", "\"schema_version\": 2"),
        ),
        (
            "unknown.json",
            text.replace("\"dim\": 3", "\"dim\": 3, \"rank\": 1"),
        ),
        (
            "bad_rational.json",
            text.replace("[0, 1, 1, 1, 1]", "[0, 1, 1, \"1/0\"]"),
        ),
        ("not_json.json", "{".to_string()),
    ];
    for (name, body) in cases {
        let p = dir.path().join(name);
        std::fs::write(&p, body).unwrap();
        let (code, out) = run(&["validate", p.to_str().unwrap()]);
        assert_eq!(code, 2, "{name}: {out}");
    }
    let (code, _) = run(&["validate", "--builtin", "sl3"]);
    assert_eq!(code, 2);
    let (code, _) = run(&["validate", "no_such_file.json"]);
    assert_eq!(code, 2);
}

#[test]
fn export_of_import_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    for name in [
        "sl2_pair.json",
        "sl2_pair_alt.json",
        "lift_nonabelian2.json",
        "corrupted_alpha.json",
    ] {
        let once = dir.path().join(format!("once_{name}"));
        let twice = dir.path().join(format!("twice_{name}"));
        run(&["validate", name, "--output", once.to_str().unwrap()]);
        run(&[
            "validate",
            once.to_str().unwrap(),
            "--output",
            twice.to_str().unwrap(),
        ]);
        let a = std::fs::read_to_string(&once).unwrap();
        assert_eq!(a, std::fs::read_to_string(&twice).unwrap(), "{name}");
        assert_eq!(ProblemFile::parse(&a).unwrap().to_canonical(), a);
    }
    let exported = dir.path().join("builtin.json");
    run(&[
        "validate",
        "--builtin",
        "sl2-pair",
        "--output",
        exported.to_str().unwrap(),
    ]);
    assert_eq!(
        std::fs::read_to_string(exported).unwrap(),
        std::fs::read_to_string(fixture("sl2_pair.json")).unwrap()
    );
}

#[test]
fn seeded_runs_are_deterministic() {
    for format in ["text", "json"] {
        let args = [
            "check",
            "--builtin",
            "sl2-killing",
            "--leibniz-n",
            "3",
            "--seed",
            "11",
            "--format",
            format,
        ];
        assert_eq!(run(&args), run(&args));
        let args = [
            "check",
            "--builtin",
            "sl2-pair",
            "--leibniz-n",
            "4",
            "--seed",
            "5",
            "--format",
            format,
        ];
        assert_eq!(run(&args), run(&args));
    }
}

#[test]
fn json_reports_carry_status_and_sections() {
    let (code, out) = run(&["cohomology", "--builtin", "sl2-pair", "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["status"], "pass");
    assert_eq!(v["sections"][0]["title"], "dimensions");
    assert!(v.get("timing_ms").is_none());
    let (_, out) = run(&[
        "cohomology",
        "--builtin",
        "sl2-pair",
        "--format",
        "json",
        "--timing",
    ]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!(v["timing_ms"].is_u64());
}

#[test]
fn check_requires_a_mode() {
    let (code, _) = run(&["check", "--builtin", "sl2-pair"]);
    assert_eq!(code, 2);
}
