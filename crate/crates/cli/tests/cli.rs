//! End-to-end tests of the `binarity` binary: exit codes, report
//! determinism, witness round-trips, and corpus runs.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_binarity"))
}

fn write(path: &Path, text: &str) {
    std::fs::write(path, text).unwrap();
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("process exited with a code")
}

const A4: &str = r#"{"name": "A4 natural", "degree": 4, "generators": ["(0 1 2)", "(1 2 3)"]}"#;
const S5: &str = r#"{"name": "S5 natural", "degree": 5, "generators": ["(0 1)", "(0 1 2 3 4)"]}"#;
const C5: &str = r#"{"name": "C5 regular", "degree": 5, "generators": ["(0 1 2 3 4)"]}"#;
const C6: &str = r#"{"name": "C6 regular", "degree": 6, "generators": ["(0 1 2 3 4 5)"]}"#;
const S4: &str = r#"{"name": "S4 natural", "degree": 4, "generators": ["(0 1)", "(0 1 2 3)"]}"#;
const C2_IN_S4: &str = r#"{"name": "C2", "degree": 4, "generators": ["(0 1)"]}"#;

#[test]
fn analyze_a4_is_nonbinary_and_witness_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let group = dir.path().join("a4.json");
    let witness = dir.path().join("a4-witness.json");
    write(&group, A4);

    let out = bin()
        .arg("analyze")
        .arg(&group)
        .arg("--emit-witness")
        .arg(&witness)
        .output()
        .unwrap();
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("verdict: NonBinary"), "{text}");
    assert!(text.contains("test1 (character bound): NonBinary"), "{text}");
    assert!(text.contains("test2 (2-closure): NonBinary"), "{text}");
    assert!(text.contains("test3 (triple scan): NonBinary"), "{text}");
    assert!(text.contains("certificates: 2 produced, all verified"), "{text}");

    let out = bin().arg("verify").arg(&witness).output().unwrap();
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    assert!(stdout(&out).contains("verified"), "{}", stdout(&out));
}

#[test]
fn analyze_s5_oracle_confirms_binary() {
    let dir = tempfile::tempdir().unwrap();
    let group = dir.path().join("s5.json");
    write(&group, S5);

    let out = bin().arg("analyze").arg(&group).output().unwrap();
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("arity 2 (exact)"), "{text}");
    assert!(text.contains("verdict: Binary (source: oracle)"), "{text}");
}

#[test]
fn analyze_reports_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let group = dir.path().join("a4.json");
    write(&group, A4);

    let run = |fmt: &str| {
        let out = bin()
            .arg("analyze")
            .arg(&group)
            .arg("--format")
            .arg(fmt)
            .output()
            .unwrap();
        assert_eq!(code(&out), 0);
        out.stdout
    };
    assert_eq!(run("text"), run("text"));
    let json = run("json");
    assert_eq!(json, run("json"));
    let v: serde_json::Value = serde_json::from_slice(&json).unwrap();
    assert_eq!(v["verdict"], "NonBinary");
    assert_eq!(v["certificates_verified"], 2);
}

#[test]
fn tampered_witness_is_rejected_with_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let group = dir.path().join("a4.json");
    let witness = dir.path().join("w.json");
    write(&group, A4);
    let out = bin()
        .arg("analyze")
        .arg(&group)
        .arg("--emit-witness")
        .arg(&witness)
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);

    // Redirect one transporter entry to the identity; the certificate must
    // stop verifying.
    let text = std::fs::read_to_string(&witness).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let table = v["pair_transporters"].as_object_mut().unwrap();
    let key = table.keys().next().unwrap().clone();
    let degree = v["group"]["degree"].as_u64().unwrap();
    let identity: Vec<u64> = (0..degree).collect();
    *v.get_mut("pair_transporters").unwrap().get_mut(&key).unwrap() = serde_json::json!(identity);
    write(&witness, &serde_json::to_string(&v).unwrap());

    let out = bin().arg("verify").arg(&witness).output().unwrap();
    assert_eq!(code(&out), 2, "stdout: {}", stdout(&out));
    assert!(stdout(&out).contains("rejected"), "{}", stdout(&out));
}

#[test]
fn invalid_group_file_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let group = dir.path().join("bad.json");
    write(&group, "not json at all");
    let out = bin().arg("analyze").arg(&group).output().unwrap();
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("parse error"), "{}", stderr(&out));
}

#[test]
fn exhausted_degree_cap_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let group = dir.path().join("s4.json");
    let sub = dir.path().join("c2.json");
    write(&group, S4);
    write(&sub, C2_IN_S4);
    let out = bin()
        .arg("analyze")
        .arg(&group)
        .arg("--cosets-of")
        .arg(&sub)
        .arg("--degree-cap")
        .arg("2")
        .output()
        .unwrap();
    assert_eq!(code(&out), 3, "stderr: {}", stderr(&out));
    assert!(stderr(&out).contains("exceeds cap"), "{}", stderr(&out));
}

#[test]
fn budget_env_var_mirrors_flag() {
    let dir = tempfile::tempdir().unwrap();
    let group = dir.path().join("s4.json");
    let sub = dir.path().join("c2.json");
    write(&group, S4);
    write(&sub, C2_IN_S4);
    let out = bin()
        .arg("analyze")
        .arg(&group)
        .arg("--cosets-of")
        .arg(&sub)
        .env("BINARITY_DEGREE_CAP", "2")
        .output()
        .unwrap();
    assert_eq!(code(&out), 3, "stderr: {}", stderr(&out));
}

#[test]
fn coset_action_analysis_realizes_the_edge_action() {
    let dir = tempfile::tempdir().unwrap();
    let group = dir.path().join("a4.json");
    let sub = dir.path().join("c2.json");
    write(&group, A4);
    write(
        &sub,
        r#"{"name": "C2 diag", "degree": 4, "generators": ["(0 1)(2 3)"]}"#,
    );
    // Alt(4) on the cosets of a double transposition = Alt(4) on the six
    // edges of K4, which is not 2-closed and hence non-binary.
    let out = bin()
        .arg("analyze")
        .arg(&group)
        .arg("--cosets-of")
        .arg(&sub)
        .output()
        .unwrap();
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("degree: 6"), "{text}");
    assert!(text.contains("test2 (2-closure): NonBinary"), "{text}");
    assert!(text.contains("verdict: NonBinary (source: test2)"), "{text}");
}

#[test]
fn one_based_input_only_parses_with_flag() {
    let dir = tempfile::tempdir().unwrap();
    let group = dir.path().join("a4.json");
    write(
        &group,
        r#"{"name": "A4", "degree": 4, "generators": ["(1 2 3)", "(2 3 4)"]}"#,
    );
    let out = bin()
        .arg("analyze")
        .arg(&group)
        .arg("--one-based")
        .output()
        .unwrap();
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    assert!(stdout(&out).contains("verdict: NonBinary"));

    // Without the flag, point 4 is out of range for degree 4.
    let out = bin().arg("analyze").arg(&group).output().unwrap();
    assert_eq!(code(&out), 2);
}

#[test]
fn closure_reports_c5_two_closed() {
    let dir = tempfile::tempdir().unwrap();
    let group = dir.path().join("c5.json");
    write(&group, C5);
    let out = bin().arg("closure").arg(&group).output().unwrap();
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("2-closed: yes"), "{text}");
    assert!(text.contains("closure order: 5"), "{text}");
}

#[test]
fn rell_counts_orbits() {
    let dir = tempfile::tempdir().unwrap();
    let group = dir.path().join("a4.json");
    write(&group, A4);
    for (method, expect) in [
        ("auto", "r_3 = 2 (character-sum)"),
        ("character-sum", "r_3 = 2 (character-sum)"),
        ("direct-orbit", "r_3 = 2 (direct-orbit)"),
    ] {
        let out = bin()
            .arg("rell")
            .arg(&group)
            .arg("--ell")
            .arg("3")
            .arg("--method")
            .arg(method)
            .output()
            .unwrap();
        assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
        assert!(stdout(&out).contains(expect), "{}", stdout(&out));
    }
}

#[test]
fn test5_c6_fixture_is_inconclusive() {
    let dir = tempfile::tempdir().unwrap();
    let group = dir.path().join("c6.json");
    write(&group, C6);
    let out = bin()
        .arg("test5")
        .arg(&group)
        .arg("--omega-size")
        .arg("4")
        .arg("--d")
        .arg("2")
        .output()
        .unwrap();
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("candidate actions: 1"), "{text}");
    assert!(text.contains("verdict: Inconclusive"), "{text}");
}

#[test]
fn corpus_run_on_empty_directory_prints_empty_table() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin().arg("corpus").arg("run").arg(dir.path()).output().unwrap();
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    assert_eq!(
        stdout(&out),
        "summary: 0 groups, 0 non-binary, 0 binary, 0 inconclusive, 0 errors\n"
    );
}

#[test]
fn corpus_run_records_error_rows_and_continues() {
    let dir = tempfile::tempdir().unwrap();
    write(&dir.path().join("a_good.json"), A4);
    write(&dir.path().join("b_bad.json"), "{broken");
    write(&dir.path().join("c_good.json"), C5);
    let out = bin().arg("corpus").arg("run").arg(dir.path()).output().unwrap();
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 4, "{text}");
    assert!(lines[0].starts_with("a_good: verdict=NonBinary"), "{text}");
    assert!(lines[1].starts_with("b_bad: error:"), "{text}");
    assert!(lines[2].starts_with("c_good: verdict=Binary"), "{text}");
    assert!(
        lines[3].contains("3 groups, 1 non-binary, 1 binary, 0 inconclusive, 1 errors"),
        "{text}"
    );
}

#[test]
fn corpus_run_is_deterministic_across_worker_counts() {
    let dir = tempfile::tempdir().unwrap();
    write(&dir.path().join("a4.json"), A4);
    write(&dir.path().join("c5.json"), C5);
    write(&dir.path().join("c6.json"), C6);
    write(&dir.path().join("s5.json"), S5);
    let run = |workers: &str| {
        let out = bin()
            .arg("corpus")
            .arg("run")
            .arg(dir.path())
            .arg("--workers")
            .arg(workers)
            .output()
            .unwrap();
        assert_eq!(code(&out), 0);
        out.stdout
    };
    let single = run("1");
    assert_eq!(single, run("4"));
    assert_eq!(single, run("8"));
}

#[test]
fn corpus_generate_writes_the_builtin_corpus() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("corpus");
    let out = bin().arg("corpus").arg("generate").arg(&target).output().unwrap();
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let files: Vec<_> = std::fs::read_dir(&target)
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    assert_eq!(files.len(), 43);
    // A generated file must be analyzable as-is.
    let out = bin()
        .arg("analyze")
        .arg(target.join("t4_04_a4.json"))
        .output()
        .unwrap();
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    assert!(stdout(&out).contains("verdict: NonBinary"));
}

#[test]
fn corpus_list_is_stable() {
    let out = bin().arg("corpus").arg("list").output().unwrap();
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 43);
    assert!(text.contains("fx_m11_11"), "{text}");
    let out2 = bin().arg("corpus").arg("list").output().unwrap();
    assert_eq!(stdout(&out2), text);
}

#[test]
fn timings_go_to_stderr_only() {
    let dir = tempfile::tempdir().unwrap();
    let group = dir.path().join("a4.json");
    write(&group, A4);
    let with = bin()
        .arg("analyze")
        .arg(&group)
        .arg("--timings")
        .output()
        .unwrap();
    let without = bin().arg("analyze").arg(&group).output().unwrap();
    assert_eq!(with.stdout, without.stdout);
    assert!(stderr(&with).contains("timing:"), "{}", stderr(&with));
    assert!(!stderr(&without).contains("timing:"));
}

#[test]
fn tests_flag_restricts_the_battery() {
    let dir = tempfile::tempdir().unwrap();
    let group = dir.path().join("a4.json");
    write(&group, A4);
    let out = bin()
        .arg("analyze")
        .arg(&group)
        .arg("--tests")
        .arg("2")
        .arg("--no-oracle")
        .output()
        .unwrap();
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("test2 (2-closure): NonBinary"), "{text}");
    assert!(!text.contains("test1 (character bound):"), "{text}");
    assert!(!text.contains("oracle (exact arity):"), "{text}");
    assert!(text.contains("verdict: NonBinary (source: test2)"), "{text}");

    let out = bin()
        .arg("analyze")
        .arg(&group)
        .arg("--tests")
        .arg("5")
        .output()
        .unwrap();
    assert_eq!(code(&out), 2, "--tests 5 must be rejected");
}
