//! End-to-end checks of the command line: exit codes, determinism, and the
//! document loading path.

use std::process::{Command, Output};

fn nds(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nds"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn orbit_csv_of_the_triangular_fixture() {
    let out = nds(&[
        "orbit",
        "--system",
        "triangular-3pt",
        "--point",
        "1",
        "--horizon",
        "10",
    ]);
    assert!(out.status.success());
    let expected = "n,point\n1,2\n2,2\n3,3\n4,3\n5,3\n6,1\n7,1\n8,1\n9,1\n10,2\n";
    assert_eq!(stdout(&out), expected);
}

#[test]
fn check_exit_codes_follow_verdicts() {
    // an isometry schedule is never sensitive: Fails -> exit 2
    let out = nds(&[
        "check",
        "--system",
        "circle-alternating",
        "--property",
        "sensitive",
        "--delta",
        "1/10",
        "--horizon",
        "100",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).contains("\"verdict\": \"FailsWitness\""));

    // the doubled map is cofinitely sensitive: Holds -> exit 0
    let out = nds(&[
        "check",
        "--system",
        "nonsurjective-transitive",
        "--property",
        "transitive",
        "--horizon",
        "30",
    ]);
    assert_eq!(out.status.code(), Some(0));

    // minimality of the block family is inconclusive by design: exit 3
    let out = nds(&[
        "check",
        "--system",
        "minimal2-blocks",
        "--property",
        "minimal_m1",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn usage_errors_exit_one() {
    let out = nds(&[
        "check",
        "--system",
        "no-such-fixture.json",
        "--property",
        "sensitive",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let out = nds(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(1));
    let out = nds(&[
        "check",
        "--system",
        "weak-but-not",
        "--property",
        "no_such_property",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn output_is_byte_identical_across_runs() {
    let args = [
        "check",
        "--system",
        "weak-but-not",
        "--property",
        "weak_sensitive",
    ];
    let a = nds(&args);
    let b = nds(&args);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.status.code(), Some(0));
}

#[test]
fn example_run_and_export_round_trip() {
    for name in nds::gallery::FIXTURE_NAMES {
        let out = nds(&["example", "run", name]);
        assert_eq!(out.status.code(), Some(0), "fixture {name} reproduces");
    }
    // exported documents load back through the file path
    let out = nds(&["example", "export", "k-transfer-counterexample"]);
    assert!(out.status.success());
    let dir = std::env::temp_dir().join("nds-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("exported.json");
    std::fs::write(&path, out.stdout).unwrap();
    let out = nds(&[
        "compare",
        "--system",
        path.to_str().unwrap(),
        "--mode",
        "period",
        "--property",
        "transitive",
        "--horizon",
        "20",
    ]);
    // sequence holds, reduction fails, direction unclaimed: NotApplicable
    assert_eq!(out.status.code(), Some(3));
    assert!(stdout(&out).contains("NotApplicable"));
}

#[test]
fn hits_and_classify_pipe_together() {
    let out = nds(&[
        "hits",
        "--system",
        "shift-growing-blocks",
        "--u",
        r#"{"0":1}"#,
        "--delta",
        "1/2",
        "--horizon",
        "300",
    ]);
    assert!(out.status.success());
    let sample = stdout(&out);
    let out = nds(&["classify", "--kind", "syndetic", "--sample", sample.trim()]);
    assert_eq!(out.status.code(), Some(2)); // gaps grow: Fails
    assert!(stdout(&out).contains("\"verdict\": \"Fails\""));
}

#[test]
fn schema_prints_the_document_contract() {
    let out = nds(&["schema"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("schema_version"));
    assert!(text.contains("generators"));
    assert!(text.contains("rational"));
}

#[test]
fn eval_applies_the_window() {
    let out = nds(&[
        "eval",
        "--system",
        "nonsurjective-transitive",
        "--point",
        "1/2",
        "--n",
        "1",
    ]);
    assert_eq!(stdout(&out).trim(), "1/4");
    let out = nds(&[
        "eval",
        "--system",
        "circle-alternating",
        "--point",
        "0",
        "--n",
        "1",
    ]);
    assert_eq!(stdout(&out).trim(), "0+1a");
}

#[test]
fn emit_curve_writes_per_cell_csv() {
    let dir = std::env::temp_dir().join("nds-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("curves.csv");
    let out = nds(&[
        "check",
        "--system",
        "nonsurjective-transitive",
        "--property",
        "sensitive",
        "--horizon",
        "12",
        "--emit-curve",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let csv = std::fs::read_to_string(&path).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("cell,n,diam,diam_decimal"));
    // 16 cells, rows n = 0..=12 each
    assert_eq!(csv.lines().count(), 1 + 16 * 13);
    assert!(csv.contains("\"[0, 1/16)\",0,1/16,"));
}
