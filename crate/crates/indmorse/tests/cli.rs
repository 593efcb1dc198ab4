//! End-to-end tests of the command-line binary: output shapes, exit
//! codes, determinism, and export round-trips.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_indmorse"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn binary")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn tmpfile(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("indmorse-cli-{}-{name}", std::process::id()));
    p
}

#[test]
fn gen_counts_and_format() {
    let out = run(&["gen", "--family", "sg", "-n", "2", "-k", "1"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("graph sg 2 1 5 5\n"), "{text}");
    assert_eq!(text.lines().filter(|l| l.starts_with("e ")).count(), 5);
    let err = String::from_utf8(out.stderr.clone()).unwrap();
    assert!(err.contains("vertices=5 edges=5"), "{err}");
}

#[test]
fn homology_output_lines() {
    let out = run(&["homology", "--family", "cycle", "-n", "6"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(
        text.contains("homology cycle-6 dim=1 betti=2 torsion=[]"),
        "{text}"
    );
}

#[test]
fn verify_reports_all_match() {
    let out = run(&["verify", "--family", "path", "--range", "3..6"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(
        text.ends_with("sweep family=path range=3..6 instances=4 result=all-match\n"),
        "{text}"
    );
}

#[test]
fn morse_script_replayable() {
    let out = run(&["morse", "--family", "cycle", "-n", "9", "--emit-script"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("critical count=2 sizes=[3, 3]"), "{text}");
    assert!(text.lines().any(|l| l.starts_with("at ")), "{text}");
}

#[test]
fn identical_invocations_identical_bytes() {
    let a = run(&["homology", "--family", "sg2", "-k", "4"]);
    let b = run(&["homology", "--family", "sg2", "-k", "4"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn export_graph_roundtrip() {
    let path = tmpfile("graph.txt");
    let out = run(&[
        "gen",
        "--family",
        "el",
        "-r",
        "4",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let stored = std::fs::read_to_string(&path).unwrap();
    let re = run(&[
        "export",
        "--kind",
        "graph",
        "--input",
        path.to_str().unwrap(),
    ]);
    assert!(re.status.success());
    assert_eq!(stdout(&re), stored);
    std::fs::remove_file(&path).ok();
}

#[test]
fn export_complex_roundtrip() {
    let path = tmpfile("complex.txt");
    let out = run(&[
        "complex",
        "--family",
        "sg2",
        "-k",
        "3",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let stored = std::fs::read_to_string(&path).unwrap();
    let re = run(&[
        "export",
        "--kind",
        "complex",
        "--input",
        path.to_str().unwrap(),
        "--family",
        "sg2",
        "-k",
        "3",
    ]);
    assert!(re.status.success());
    assert_eq!(stdout(&re), stored);
    std::fs::remove_file(&path).ok();
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(
        run(&["gen", "--family", "badfam", "-n", "3"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["homology", "--family", "path"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["gen"]).status.code(), Some(2));
}

#[test]
fn budget_exhaustion_exits_3() {
    let out = run(&[
        "morse",
        "--family",
        "cycle",
        "-n",
        "9",
        "--budget-nodes",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(3));
}
