use std::io::Write;
use std::process::{Command, Output, Stdio};

fn qcli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qcli")).args(args).output().unwrap()
}

fn qcli_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_qcli"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn records(o: &Output, prefix: &str) -> Vec<String> {
    stdout(o).lines().filter(|l| l.starts_with(prefix)).map(String::from).collect()
}

#[test]
fn lists_every_example() {
    let o = qcli(&["example", "--list"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    for name in ["omega1", "omega2-2", "o-20", "case4", "case5", "case6", "lepotier", "split-sum", "null-corr-family"] {
        assert!(out.lines().any(|l| l.split_whitespace().next() == Some(name)), "{name}");
    }
}

#[test]
fn omega1_has_single_h1_on_the_diagonal() {
    let o = qcli(&["--format", "records", "cohomology", "example:omega1", "--window", "-3..3"]);
    assert_eq!(code(&o), 0);
    let diag = records(&o, "cohomology");
    let nonzero: Vec<&String> = diag.iter().filter(|l| l.contains("series=O\t") && !l.contains("h1=0")).collect();
    assert_eq!(nonzero.len(), 1);
    assert!(nonzero[0].contains("d=0") && nonzero[0].contains("h1=1"));
}

#[test]
fn lepotier_sections_vanish() {
    let o = qcli(&["--format", "records", "cohomology", "example:lepotier", "--window", "-1..1"]);
    let lines = records(&o, "cohomology");
    let zero_at = |t: &str| lines.iter().any(|l| l.contains(&format!("twist={t}\t")) && l.contains("h0=0"));
    assert!(zero_at("(0,0)"));
    let o = qcli(&["--format", "records", "stability", "example:lepotier"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.contains("stable\ttrue"));
    assert!(out.contains("block=g1") && out.contains("multiplicities=[2]"));
    assert_eq!(records(&o, "h0").iter().filter(|l| l.ends_with("dim=0")).count(), 3);
}

#[test]
fn invariants_of_examples() {
    let o = qcli(&["--format", "records", "invariants", "example:o-20"]);
    assert_eq!(code(&o), 0);
    assert_eq!(records(&o, "W"), vec!["W\td=0\tdim=2"]);
    assert!(records(&o, "V").is_empty());
    let o = qcli(&["--format", "records", "invariants", "example:lepotier"]);
    assert_eq!(records(&o, "module"), vec!["module\td=-1\tdim=2"]);
    assert_eq!(records(&o, "W"), vec!["W\td=-1\tdim=2"]);
    assert_eq!(records(&o, "V"), vec!["V\td=-1\tdim=2"]);
}

#[test]
fn unstripped_input_is_a_precondition_failure() {
    let file = "field p=32003\nbundle gamma\nA: (-1,0) (-1,0) (0,0)\nB: (0,0)\ng: [s, t, 0]\n";
    let o = qcli_stdin(&["invariants", "-"], file);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("strip-acm"));
    let stripped = qcli_stdin(&["strip-acm", "-"], file);
    assert_eq!(code(&stripped), 0);
    assert!(stdout(&stripped).contains("# removed O(0,0)"));
    let o = qcli_stdin(&["--format", "records", "invariants", "-"], &stdout(&stripped));
    assert_eq!(code(&o), 0);
    assert_eq!(records(&o, "W"), vec!["W\td=0\tdim=2"]);
}

#[test]
fn random_module_reproduces_k0_and_is_seeded() {
    let o = qcli(&["random-module", "--dims", "1@0"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "field p=32003\nmodule\ndegrees 0..0\ndim 0: 1\n");
    let a = qcli(&["random-triple", "--dims", "1,2@-1", "--seed", "9"]);
    let b = qcli(&["random-triple", "--dims", "1,2@-1", "--seed", "9"]);
    assert_eq!(code(&a), 0);
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn triple_file_round_trip_and_iso() {
    let t = qcli(&["random-triple", "--seed", "3"]);
    assert_eq!(code(&t), 0);
    let text = stdout(&t);
    let o = qcli_stdin(&["roundtrip", "-", "--trials", "50"], &text);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("roundtrip passed"));
    let dir = std::env::temp_dir().join(format!("qcli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("t.txt");
    std::fs::write(&path, &text).unwrap();
    let p = path.to_str().unwrap();
    let o = qcli(&["iso", p, p]);
    assert_eq!(code(&o), 0);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn synthesize_then_extract() {
    let triple = stdout(&qcli(&["invariants", "example:case5"]));
    let monad = qcli_stdin(&["synthesize", "-"], &triple);
    assert_eq!(code(&monad), 0);
    assert!(stdout(&monad).contains("bundle monad"));
    let again = qcli_stdin(&["invariants", "-"], &stdout(&monad));
    assert_eq!(code(&again), 0);
    let gamma = qcli_stdin(&["synthesize", "--gamma", "-"], &triple);
    assert!(stdout(&gamma).contains("bundle gamma"));
}

#[test]
fn exit_codes_for_bad_input() {
    assert_eq!(code(&qcli_stdin(&["cohomology", "-"], "field p=32003\nbundle gamma\nA: (-1,0)\n")), 2);
    assert_eq!(code(&qcli(&["cohomology", "example:nope"])), 2);
    assert_eq!(code(&qcli(&["stability", "example:omega1"])), 3);
    assert_eq!(code(&qcli(&["--window", "3..1", "cohomology", "example:omega1"])), 2);
}
