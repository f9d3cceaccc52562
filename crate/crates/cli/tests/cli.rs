use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn leibalg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_leibalg"))
        .args(args)
        .env_remove("LEIBALG_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn make(dir: &TempDir, name: &str, field: &str, params: &[&str]) -> PathBuf {
    let out = dir.path().join(format!("{name}.txt"));
    let mut args = vec!["catalog", "make", name, "--field", field];
    for p in params {
        args.push("--param");
        args.push(p);
    }
    args.push("-o");
    args.push(s(&out));
    let o = leibalg(&args);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    out
}

const HEISENBERG: &str = "leibalg v1\nfield Q\ndim 3\nbasis x y z\n[1,2] = 1*3\n[2,1] = -1*3\n";

#[test]
fn p1_on_the_coclass_one_family() {
    let dir = TempDir::new().unwrap();
    let f = make(&dir, "cc1_case2", "GF(3)", &["tau=1", "lambda=0", "epsilon=0"]);
    let o = leibalg(&["p1", s(&f)]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("P1 holds: 4 maximal subalgebras"), "{}", stdout(&o));
}

#[test]
fn p2_counterexample_names_the_abelian_maximal() {
    let dir = TempDir::new().unwrap();
    let f = make(&dir, "cex_fourdim_A1", "GF(3)", &[]);
    let o = leibalg(&["p2", s(&f)]);
    assert_eq!(code(&o), 1);
    let out = stdout(&o);
    assert!(out.starts_with("P2 fails"), "{out}");
    assert!(out.contains(" abelian, M") && out.contains("non-abelian"), "{out}");
}

#[test]
fn p1_counterexample_reports_leib_dims() {
    let dir = TempDir::new().unwrap();
    let f = make(&dir, "cex_A8", "GF(5)", &[]);
    let o = leibalg(&["p1", s(&f)]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("leib_dim 1 vs 0"), "{}", stdout(&o));
}

#[test]
fn verify_reports_parse_errors_with_line_numbers() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "bad.txt", "leibalg v1\nfield GF(5)\ndim 2\n[1,3] = 1*2\n");
    let o = leibalg(&["verify", s(&f)]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("line 4"), "{}", stderr(&o));
    let missing = leibalg(&["verify", s(&dir.path().join("absent.txt"))]);
    assert_eq!(code(&missing), 2);
}

#[test]
fn verify_accepts_and_rejects() {
    let dir = TempDir::new().unwrap();
    let good = write(&dir, "h.txt", HEISENBERG);
    let o = leibalg(&["verify", s(&good)]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "Leibniz identity holds on all 27 basis triples\n");
    let bad = write(&dir, "b.txt", "leibalg v1\nfield Q\ndim 1\n[1,1] = 1*1\n");
    let o = leibalg(&["verify", s(&bad)]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("fails on 1 of 1"), "{}", stdout(&o));
}

#[test]
fn analyze_prints_fixed_lines() {
    let dir = TempDir::new().unwrap();
    let f = make(&dir, "cyclic_example4", "Q", &[]);
    let o = leibalg(&["analyze", s(&f)]);
    assert_eq!(code(&o), 0);
    assert_eq!(
        stdout(&o),
        "field: Q\ndim: 4\nlower dims: 4 3 2 1 0\nupper dims: 0 1 2 3 4\nnilpotent: true\n\
         class: 4\ncoclass: 0\ndim Z: 1\ndim Leib: 3\ncyclic: true\nlie: false\n"
    );
}

#[test]
fn maximals_need_a_finite_field() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "h.txt", HEISENBERG);
    let o = leibalg(&["maximals", s(&f)]);
    assert_eq!(code(&o), 2);
    let o = leibalg(&["maximals", s(&f), "--field", "GF(3)"]);
    assert_eq!(code(&o), 0);
    let lines: Vec<String> = stdout(&o).lines().map(String::from).collect();
    assert_eq!(lines.len(), 4);
    assert!(lines[0].starts_with("[0,1] "));
    let digest = lines[0].split(' ').nth(1).unwrap();
    assert!(lines.iter().all(|l| l.ends_with(digest)));
}

#[test]
fn iso_finds_a_map_and_a_witness() {
    let dir = TempDir::new().unwrap();
    let h = write(&dir, "h.txt", HEISENBERG);
    let twisted = write(
        &dir,
        "t.txt",
        "leibalg v1\nfield Q\ndim 3\n[1,3] = 2*2\n[3,1] = -2*2\n",
    );
    let o = leibalg(&["iso", s(&h), s(&twisted), "--field", "GF(5)"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stdout(&o).starts_with("isomorphic\n  x -> "), "{}", stdout(&o));
    let ab = write(&dir, "a.txt", "leibalg v1\nfield Q\ndim 3\n");
    let o = leibalg(&["iso", s(&h), s(&ab), "--field", "GF(5)"]);
    assert_eq!(code(&o), 1);
    assert_eq!(stdout(&o), "not isomorphic: non-abelian vs abelian\n");
    let o = leibalg(&["iso", s(&h), s(&twisted)]);
    assert_eq!(code(&o), 2);
}

#[test]
fn catalog_check_and_make_errors() {
    let o = leibalg(&[
        "catalog", "check", "cc1_case2", "--field", "GF(5)", "--param", "tau=1", "--param", "lambda=1", "--param",
        "epsilon=1",
    ]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).lines().any(|l| l.starts_with("FAIL")), "{}", stdout(&o));
    let o = leibalg(&["catalog", "make", "cc1_case2", "--field", "GF(5)", "--param", "tau=1"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("lambda"), "{}", stderr(&o));
    let o = leibalg(&["catalog", "make", "nonexistent", "--field", "GF(5)"]);
    assert_eq!(code(&o), 2);
    let o = leibalg(&["catalog", "list"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).lines().count(), 15);
}

#[test]
fn catalog_make_to_stdout_roundtrips() {
    let o = leibalg(&["catalog", "make", "A18", "--field", "GF(5)", "--param", "alpha=2"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.starts_with("leibalg v1\nfield GF(5)\ndim 4\n"), "{text}");
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "a18.txt", &text);
    assert_eq!(code(&leibalg(&["verify", s(&f)])), 0);
}

#[test]
fn derive_and_verify_relations() {
    let dir = TempDir::new().unwrap();
    let table = write(
        &dir,
        "t.txt",
        "leibalg v1\ndim 3\nparams a b\n[1,1] = a*2\n[1,2] = b*3\n[2,1] = 1*3\n",
    );
    let o = leibalg(&["derive", s(&table)]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "1 constraints\na = 0\n");
    let rel = write(&dir, "r.txt", "a\n");
    let o = leibalg(&["verify-relations", s(&table), s(&rel), "--field", "GF(101)", "--trials", "20"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).trim_end().ends_with("verdict: pass"));
    let wrong = write(&dir, "w.txt", "b\n");
    let o = leibalg(&["verify-relations", s(&table), s(&wrong)]);
    assert_eq!(code(&o), 1);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&leibalg(&[])), 2);
    assert_eq!(code(&leibalg(&["p1"])), 2);
    assert_eq!(code(&leibalg(&["reproduce", "--fields", "3,4"])), 2);
    assert_eq!(code(&leibalg(&["maximals", "x.txt", "--field", "GF(6)"])), 2);
}

#[test]
fn reproduce_writes_a_passing_report() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("report.txt");
    let o = leibalg(&["reproduce", "--out", s(&out), "--seed", "0"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let text = fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "leibalg reproduce report");
    assert_eq!(lines[1], "fields GF(3),GF(5),GF(7) seed 0");
    assert!(lines.iter().any(|l| l.starts_with("SKIP identity.A1_6dim.gf3 ")));
    assert!(!text.contains("\nFAIL "));
    assert_eq!(stdout(&o).trim_end(), *lines.last().unwrap());
    assert!(lines.last().unwrap().contains(" 0 fail"));
}

#[test]
fn reproduce_negative_control_and_bad_output() {
    let dir = TempDir::new().unwrap();
    let o = leibalg(&["reproduce", "--out", s(&dir.path().join("no/such/dir/r.txt"))]);
    assert_eq!(code(&o), 2);
    let o = leibalg(&["reproduce", "--corrupt", "nonexistent"]);
    assert_eq!(code(&o), 2);
    let out = dir.path().join("r.txt");
    let o = Command::new(env!("CARGO_BIN_EXE_leibalg"))
        .args(["reproduce", "--corrupt", "cex_A8", "--fields", "3", "--out", s(&out)])
        .env("LEIBALG_SEED", "9")
        .output()
        .unwrap();
    assert_eq!(code(&o), 1);
    let text = fs::read_to_string(&out).unwrap();
    assert!(text.contains("seed 9"));
    assert!(text.lines().any(|l| l.starts_with("FAIL identity.cex_A8.gf3 ")), "{text}");
}
