use std::path::Path;
use std::process::{Command, Output};

use specsparse::io::{read_matrix, read_pattern, read_report, write_matrix, MatrixFormat};
use specsparse::structgen::cos_test_matrix;
use specsparse::Matrix;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_specsparse")).args(args).output().unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn gen_then_sparsify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let a_path = dir.path().join("a.mtx");
    let x_path = dir.path().join("x.mtx");
    let z_path = dir.path().join("z.mtx");
    let r_path = dir.path().join("r.json");

    let o = bin(&["gen", "--kind", "hermitian", "--size", "6", "--seed", "3", "--output", s(&a_path)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let a = read_matrix(&a_path).unwrap();
    assert!((&a - a.adjoint()).norm() < 1e-15);

    let o = bin(&[
        "sparsify", "--input", s(&a_path), "--p", "2", "--q", "0.6",
        "--output", s(&x_path), "--pattern-out", s(&z_path), "--report", s(&r_path),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let stdout = String::from_utf8(o.stdout).unwrap();
    assert!(stdout.starts_with("nnz="));

    let x = read_matrix(&x_path).unwrap();
    let z = read_pattern(&z_path).unwrap();
    let report = read_report(&r_path).unwrap();
    assert_eq!(z.shape(), (6, 6));
    assert_eq!(report.nnz_x, x.iter().filter(|v| v.norm() != 0.0).count());
    assert!(report.nnz_x <= z.nnz());
    // Hermitian input keeps a Hermitian minimizer.
    assert!((&x - x.adjoint()).norm() < 1e-10 * x.norm());
}

#[test]
fn golden_summary_and_sweep_agree() {
    let dir = tempfile::tempdir().unwrap();
    let a_path = dir.path().join("cos.mtx");
    let csv_path = dir.path().join("sweep.csv");
    write_matrix(&cos_test_matrix(40), &a_path, MatrixFormat::Dense).unwrap();

    let o = bin(&["sparsify", "--input", s(&a_path), "--p", "1", "--q", "0.8"]);
    assert!(o.status.success());
    let summary = String::from_utf8(o.stdout).unwrap();
    assert!(summary.contains("nnz=597"), "{summary}");
    assert!(summary.contains("cond_pinva_x=4.730"), "{summary}");

    let o = bin(&["sweep", "--input", s(&a_path), "--p-list", "1,inf", "--q-list", "0.8", "--output", s(&csv_path)]);
    assert!(o.status.success());
    let csv = std::fs::read_to_string(&csv_path).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("1,0.8,597,"));
    assert!(lines[2].starts_with("inf,0.8,"));
}

#[test]
fn diagnose_prints_json() {
    let dir = tempfile::tempdir().unwrap();
    let a_path = dir.path().join("a.mtx");
    write_matrix(&Matrix::identity(3, 3), &a_path, MatrixFormat::Coordinate).unwrap();
    let o = bin(&["diagnose", "--input", s(&a_path), "--p", "inf"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["p"], "inf");
    assert_eq!(v["nnz_x"], 3);
}

#[test]
fn exit_codes() {
    assert_eq!(bin(&["--help"]).status.code(), Some(0));
    assert_eq!(bin(&["--version"]).status.code(), Some(0));
    assert_eq!(bin(&[]).status.code(), Some(1));
    assert_eq!(bin(&["sparsify", "--input", "/nonexistent/a.mtx"]).status.code(), Some(1));

    let dir = tempfile::tempdir().unwrap();
    let a_path = dir.path().join("a.mtx");
    write_matrix(&Matrix::identity(3, 3), &a_path, MatrixFormat::Dense).unwrap();
    assert_eq!(bin(&["sparsify", "--input", s(&a_path), "--q", "1.5"]).status.code(), Some(1));
    assert_eq!(bin(&["pattern", "--input", s(&a_path), "--p", "-1"]).status.code(), Some(1));
    assert_eq!(bin(&["pattern", "--input", s(&a_path), "--p", "abc"]).status.code(), Some(1));
    let out = dir.path().join("h.mtx");
    let o = bin(&["gen", "--kind", "hamiltonian", "--size", "5", "--output", s(&out)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("even"));

    let bad = dir.path().join("bad.mtx");
    std::fs::write(&bad, "%%MatrixMarket matrix array real general\n2 2\n1\n2\nx\n4\n").unwrap();
    let o = bin(&["sparsify", "--input", s(&bad)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line"));
}

#[test]
fn pattern_subcommand_writes_mask() {
    let dir = tempfile::tempdir().unwrap();
    let a_path = dir.path().join("a.mtx");
    let z_path = dir.path().join("z.mtx");
    write_matrix(&cos_test_matrix(10), &a_path, MatrixFormat::Dense).unwrap();
    let o = bin(&["pattern", "--input", s(&a_path), "--q", "1", "--output", s(&z_path)]);
    assert!(o.status.success());
    assert_eq!(read_pattern(&z_path).unwrap().nnz(), 100);
}
