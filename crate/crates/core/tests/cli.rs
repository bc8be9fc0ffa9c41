mod common;

use std::path::{Path, PathBuf};
use std::process::Command;
use std::sync::atomic::{AtomicUsize, Ordering};

use common::*;
use ffsync::cli::{self, OracleDocument, ReportDocument};

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("ffsync").chain(args.iter().copied());
    let code = cli::run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn path(name: &str) -> String {
    system_path(name).to_string_lossy().into_owned()
}

static NEXT: AtomicUsize = AtomicUsize::new(0);

struct TempFile(PathBuf);

impl TempFile {
    fn new(name: &str, text: &str) -> Self {
        let dir = std::env::temp_dir().join(format!("ffsync-cli-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let k = NEXT.fetch_add(1, Ordering::Relaxed);
        let p = dir.join(format!("{k}-{name}"));
        std::fs::write(&p, text).unwrap();
        TempFile(p)
    }

    fn path(&self) -> &str {
        self.0.to_str().unwrap()
    }
}

impl Drop for TempFile {
    fn drop(&mut self) {
        let _ = std::fs::remove_file(&self.0);
    }
}

fn identity_file() -> TempFile {
    TempFile::new(
        "identity.txt",
        "p=3\nn=2\nm=2\nA=\n1 0 0 0\n0 1 0 0\n0 0 1 0\n0 0 0 1\n",
    )
}

fn swap_file() -> TempFile {
    TempFile::new("swap.txt", "p=2\nn=2\nm=1\nA=\n0 1\n1 0\n")
}

#[test]
fn analyze_example3_reports_consensus() {
    let (code, out, _) = run(&["analyze", &path("example3.txt")]);
    assert_eq!(code, cli::EXIT_SYNC);
    let doc: ReportDocument = serde_json::from_str(&out).unwrap();
    assert!(doc.verdicts.synchronizes && doc.verdicts.consensus);
    assert_eq!(doc.verdicts.consensus_form.as_deref(), Some("fixed_point"));
    assert_eq!(doc.char_poly_a, vec![0, 0, 0, 0, 0, 0, 0, 1, 3, 1]);
    assert_eq!(doc.min_poly_q, vec![4, 1]);
    assert_eq!(doc.cross_checks.oracle_agrees, Some(true));
}

#[test]
fn analyze_example2_file_basis() {
    let (code, out, _) = run(&["analyze", &path("example2.txt"), "--basis", "paper"]);
    assert_eq!(code, 0);
    let doc: ReportDocument = serde_json::from_str(&out).unwrap();
    assert_eq!(doc.q.matrix, vec![vec![1, 1], vec![1, 2]]);
    assert_eq!(doc.q.basis_source, "paper");
    assert_eq!(doc.q.basis, vec![vec![1, 2, 0], vec![1, 0, 1]]);
    assert_eq!(doc.char_poly_q, vec![1, 0, 1]);
    assert_eq!(doc.verdicts.theorem_used, "thm2");
    assert!(!doc.verdicts.consensus);
    assert_eq!(doc.terminal.unwrap().period, Some(4));
}

#[test]
fn analyze_example1_uses_invariant_criterion() {
    let (code, out, _) = run(&["analyze", &path("example1.txt")]);
    assert_eq!(code, 0);
    let doc: ReportDocument = serde_json::from_str(&out).unwrap();
    assert!(doc.s_invariant);
    assert_eq!(doc.verdicts.theorem_used, "thm1");
    assert_eq!(doc.cross_checks.theorem1, Some(true));
    assert_eq!(doc.block_row_sums, vec![vec![vec![3, 3], vec![4, 1]]; 3]);
    assert_eq!(doc.char_poly_a1, vec![1, 1, 1]);
}

#[test]
fn file_basis_without_block_is_an_input_error() {
    let (code, _, err) = run(&["analyze", &path("example1.txt"), "--basis", "paper"]);
    assert_eq!(code, cli::EXIT_INPUT);
    assert!(err.contains("basis"));
}

#[test]
fn identity_does_not_synchronize() {
    let f = identity_file();
    let (code, out, _) = run(&["analyze", f.path()]);
    assert_eq!(code, cli::EXIT_NOT_SYNC);
    let doc: ReportDocument = serde_json::from_str(&out).unwrap();
    assert!(!doc.verdicts.synchronizes);
    assert!(doc.verdicts.consensus_form.is_none());
    assert!(doc.terminal.is_none());
}

#[test]
fn reports_are_byte_identical() {
    for name in ["example1.txt", "example2.txt", "example3.txt"] {
        let a = run(&["analyze", &path(name)]).1;
        let b = run(&["analyze", &path(name)]).1;
        assert_eq!(a, b);
        // key order is part of the format
        let keys: Vec<&str> = a
            .lines()
            .filter(|l| l.starts_with("  \""))
            .map(|l| l.trim().split('"').nth(1).unwrap())
            .collect();
        assert_eq!(
            keys,
            [
                "p",
                "n",
                "m",
                "s_invariant",
                "block_row_sums",
                "w1_basis",
                "d",
                "q",
                "char_poly_a",
                "char_poly_a1",
                "char_poly_q",
                "min_poly_q",
                "verdicts",
                "cross_checks",
                "terminal"
            ]
        );
    }
}

#[test]
fn parse_errors_exit_2() {
    let f = TempFile::new("p4.txt", "p=4\nn=1\nm=1\nA=\n1\n");
    let (code, _, err) = run(&["analyze", f.path()]);
    assert_eq!(code, cli::EXIT_INPUT);
    assert!(err.contains("modulus not prime"), "{err}");

    let rows: String = (0..5).map(|_| "0 0 0 0 0 0\n").collect();
    let f = TempFile::new("short.txt", &format!("p=5\nn=3\nm=2\nA=\n{rows}"));
    let (code, _, err) = run(&["analyze", f.path()]);
    assert_eq!(code, cli::EXIT_INPUT);
    assert!(err.contains("5 rows, expected 6"), "{err}");

    let (code, _, _) = run(&["analyze", "/nonexistent/system.txt"]);
    assert_eq!(code, cli::EXIT_INPUT);
    let (code, _, _) = run(&["frobnicate"]);
    assert_eq!(code, cli::EXIT_INPUT);
}

fn parse_table(text: &str) -> (Vec<Vec<u64>>, String) {
    let mut lines = text.lines();
    lines.next().unwrap();
    let mut rows = Vec::new();
    let mut trailer = String::new();
    for l in lines {
        if l.starts_with('#') {
            trailer = l.to_string();
        } else {
            rows.push(l.split(',').skip(1).map(|v| v.parse().unwrap()).collect());
        }
    }
    (rows, trailer)
}

fn verify_table(file: &str, rows: &[Vec<u64>]) {
    let sys = load(file).system;
    for w in rows.windows(2) {
        assert_eq!(sys.matrix().mul_vec(&w[0]).unwrap(), w[1]);
    }
}

#[test]
fn simulate_example1_table() {
    let (code, out, _) = run(&[
        "simulate",
        &path("example1.txt"),
        "--x0",
        "2,2,4,0,1,1",
        "--steps",
        "20",
    ]);
    assert_eq!(code, 0);
    assert!(out.starts_with("t,x1_1,x1_2,x2_1,x2_2,x3_1,x3_2\n"));
    let (rows, trailer) = parse_table(&out);
    assert_eq!(rows.len(), 21);
    verify_table("example1.txt", &rows);
    let t: usize = trailer
        .split_whitespace()
        .find_map(|w| w.strip_prefix("sync_time="))
        .unwrap()
        .parse()
        .unwrap();
    for r in &rows[t..] {
        assert!(r[0..2] == r[2..4] && r[2..4] == r[4..6]);
    }
    assert!(trailer.contains("period=3"));
}

#[test]
fn simulate_example3_becomes_constant() {
    let (code, out, _) = run(&[
        "simulate",
        &path("example3.txt"),
        "--x0",
        "3,2,4,1,4,0,2,3,1",
        "--steps",
        "12",
    ]);
    assert_eq!(code, 0);
    let (rows, trailer) = parse_table(&out);
    verify_table("example3.txt", &rows);
    assert_eq!(rows.last().unwrap(), &vec![4, 1, 0, 4, 1, 0, 4, 1, 0]);
    assert!(trailer.contains("period=1"));
}

#[test]
fn simulate_zero_state() {
    let (code, out, _) = run(&[
        "simulate",
        &path("example2.txt"),
        "--x0",
        "0,0,0,0,0,0,0,0,0",
        "--steps",
        "4",
    ]);
    assert_eq!(code, 0);
    let (rows, trailer) = parse_table(&out);
    assert!(rows.iter().all(|r| r.iter().all(|&v| v == 0)));
    assert_eq!(trailer, "# sync_time=0 cycle_start=0 period=1");
}

#[test]
fn simulate_rejects_bad_state() {
    let ex1 = path("example1.txt");
    for x0 in ["1,2,3", "5,0,0,0,0,0", "-1,0,0,0,0,0", "a,0,0,0,0,0"] {
        let (code, _, _) = run(&["simulate", &ex1, "--x0", x0, "--steps", "3"]);
        assert_eq!(code, cli::EXIT_INPUT, "{x0}");
    }
}

#[test]
fn oracle_example2() {
    let (code, out, _) = run(&["oracle", &path("example2.txt")]);
    assert_eq!(code, 0);
    let doc: OracleDocument = serde_json::from_str(&out).unwrap();
    assert!(doc.algebraic.sync && doc.exhaustive.unwrap().sync && doc.agree);
    assert!(!doc.exhaustive.unwrap().consensus);
    assert_eq!(doc.states, Some(19683));
}

#[test]
fn oracle_example3_limits() {
    let ex3 = path("example3.txt");
    let (code, _, err) = run(&["oracle", &ex3, "--state-limit", "1000"]);
    assert_eq!(code, cli::EXIT_INPUT);
    assert!(err.contains("--algebraic-only"));

    let (code, out, _) = run(&["oracle", &ex3, "--algebraic-only"]);
    assert_eq!(code, 0);
    let doc: OracleDocument = serde_json::from_str(&out).unwrap();
    assert!(doc.algebraic.consensus && doc.exhaustive.is_none());

    let (code, out, _) = run(&["oracle", &ex3, "--state-limit", "2000000"]);
    assert_eq!(code, 0);
    let doc: OracleDocument = serde_json::from_str(&out).unwrap();
    assert!(doc.algebraic.consensus && doc.exhaustive.unwrap().consensus && doc.agree);
}

#[test]
fn oracle_swap_system() {
    let f = swap_file();
    let (code, out, _) = run(&["oracle", f.path()]);
    assert_eq!(code, cli::EXIT_NOT_SYNC);
    let doc: OracleDocument = serde_json::from_str(&out).unwrap();
    assert!(!doc.algebraic.sync && !doc.exhaustive.unwrap().sync && !doc.analysis.sync);
    assert!(doc.agree);
}

fn binary(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_ffsync"))
        .args(args)
        .current_dir(Path::new(env!("CARGO_MANIFEST_DIR")))
        .output()
        .unwrap()
}

#[test]
fn binary_exit_codes() {
    let out = binary(&["analyze", "systems/example1.txt"]);
    assert_eq!(out.status.code(), Some(0));
    let direct = run(&["analyze", &path("example1.txt")]).1;
    assert_eq!(String::from_utf8(out.stdout).unwrap(), direct);

    let f = identity_file();
    assert_eq!(binary(&["analyze", f.path()]).status.code(), Some(1));
    let out = binary(&["analyze", "systems/missing.txt"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
    assert_eq!(binary(&["--help"]).status.code(), Some(0));
}
