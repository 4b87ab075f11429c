use std::path::Path;
use std::process::{Command, Output};

fn happy(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_happy")).args(args).env_remove("HAPPY_MAX_SUBSETS").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

const TRIANGLE: &str = "happy mhe 3 3 2 0\nv 1 c 1\nv 2 c 2\ne 1 2\ne 2 3\ne 1 3\n";

#[test]
fn solve_prints_json_record() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "t.happy", TRIANGLE);
    let out = happy(&["solve", "--input", &f, "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let s = stdout(&out);
    assert!(s.starts_with(r#"{"variant":"mhe","algorithm":"complete-mhe","optimum":1,"happyWeight":1"#), "{s}");
}

#[test]
fn explicit_algorithms_agree() {
    let dir = tempfile::tempdir().unwrap();
    let text = "happy mhv 5 6 3 0\nv 1 c 1\nv 5 c 2\ne 1 2\ne 2 3\ne 3 4\ne 4 5\ne 1 3\ne 2 4\n";
    let f = write(dir.path(), "i.happy", text);
    let mut optima = Vec::new();
    for algo in ["auto", "brute", "k3", "nd", "twdp", "exact"] {
        let out = happy(&["solve", "--input", &f, "--algo", algo, "--json"]);
        assert_eq!(out.status.code(), Some(0), "{algo}");
        let s = stdout(&out);
        let at = s.find("\"optimum\":").unwrap() + 10;
        optima.push(s[at..].split(',').next().unwrap().to_string());
    }
    assert!(optima.windows(2).all(|w| w[0] == w[1]), "{optima:?}");
}

#[test]
fn decision_mode_reports_answer() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "t.happy", TRIANGLE);
    let out = happy(&["solve", "--input", &f, "--target", "2", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains(r#""target":2,"answer":"no""#));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(happy(&["solve"]).status.code(), Some(1));
    assert_eq!(happy(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(happy(&["--help"]).status.code(), Some(0));
    let f = write(dir.path(), "t.happy", TRIANGLE);
    assert_eq!(happy(&["solve", "--input", &f, "--algo", "nope"]).status.code(), Some(1));

    let bad = write(dir.path(), "bad.happy", "happy mhe 3 2 2 0\ne 1 2\ne 2 1\n");
    let out = happy(&["solve", "--input", &bad]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));

    // treedp on a cyclic instance breaks its precondition
    let k3 = write(dir.path(), "k3.happy", "happy mhe 3 3 3 0\ne 1 2\ne 2 3\ne 1 3\n");
    assert_eq!(happy(&["solve", "--input", &k3, "--algo", "treedp"]).status.code(), Some(2));

    let mut big = String::from("happy mhe 30 29 4 0\n");
    for v in 1..30 {
        big.push_str(&format!("e {} {}\n", v, v + 1));
    }
    let big = write(dir.path(), "big.happy", &big);
    assert_eq!(happy(&["solve", "--input", &big, "--algo", "brute"]).status.code(), Some(3));
    assert_eq!(happy(&["solve", "--input", &big]).status.code(), Some(0));
}

#[test]
fn check_evaluates_colorings() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "t.happy", TRIANGLE);
    let out = happy(&["check", "--input", &f, "--coloring", "1,2,1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "happy weight: 1\n");
    let c = write(dir.path(), "c.txt", "1 2 2\n");
    assert_eq!(stdout(&happy(&["check", "--input", &f, "--coloring", &c])), "happy weight: 1\n");
    assert_eq!(happy(&["check", "--input", &f, "--coloring", "2,2,2"]).status.code(), Some(2));
}

#[test]
fn gen_is_reproducible_and_transform_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["gen", "--model", "gnp", "--seed", "1", "--n", "6", "--p", "0.5", "--k", "3"];
    let a = stdout(&happy(&args));
    assert_eq!(a, stdout(&happy(&args)));
    assert!(a.starts_with("happy mhe 6 "));

    let f = write(dir.path(), "t.happy", TRIANGLE);
    let out_path = dir.path().join("s.happy");
    let out = happy(&["transform", "--kind", "subdivide", "--input", &f, "--output", out_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let solved = happy(&["solve", "--input", out_path.to_str().unwrap(), "--json"]);
    assert!(stdout(&solved).contains("\"optimum\":4"));

    let split = stdout(&happy(&["transform", "--kind", "split-mhv", "--input", &f]));
    assert!(split.starts_with("happy mhv 6 "));
}

#[test]
fn kernelize_decides_or_reduces() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "t.happy", "happy mhe 4 4 2 4\ne 1 2\ne 2 3\ne 3 4\ne 1 4\n");
    let out = happy(&["kernelize", "--input", &f]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("answer: yes"));
    let t = write(dir.path(), "t2.happy", TRIANGLE);
    assert_eq!(happy(&["kernelize", "--input", &t]).status.code(), Some(1));
}

#[test]
fn bench_flags_nothing_on_consistent_solvers() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "a.happy", TRIANGLE);
    let out = happy(&["bench", "--dir", dir.path().to_str().unwrap(), "--algos", "brute,exact,auto", "--reps", "1"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert_eq!(stdout(&out).lines().count(), 4);

    let empty = tempfile::tempdir().unwrap();
    let out = happy(&["bench", "--dir", empty.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("warning"));
}
