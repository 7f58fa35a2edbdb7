//! Matrix Market reading and writing, pattern files and JSON reports.
//!
//! Reading accepts `array` and `coordinate` storage with `real`, `complex`,
//! `integer` or `pattern` fields and expands `symmetric`, `hermitian` and
//! `skew-symmetric` storage. Writing emits `general` files with 17
//! significant digits so that a write/read cycle is exact.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use num_complex::Complex64;

use crate::diagnostics::Report;
use crate::error::{Error, Result};
use crate::linalg::{is_real, Matrix};
use crate::pattern::Pattern;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixFormat {
    /// Column-major `array` storage of every entry.
    Dense,
    /// `coordinate` storage listing the nonzero entries.
    Coordinate,
}

impl std::str::FromStr for MatrixFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "dense" | "array" => Ok(MatrixFormat::Dense),
            "coordinate" | "sparse" => Ok(MatrixFormat::Coordinate),
            _ => Err(Error::InvalidParameter(format!("unknown format {s:?}, expected dense or coordinate"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Storage {
    Array,
    Coordinate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Field {
    Real,
    Complex,
    Integer,
    Pattern,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Symmetry {
    General,
    Symmetric,
    Hermitian,
    SkewSymmetric,
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn parse_header(line_no: usize, line: &str) -> Result<(Storage, Field, Symmetry)> {
    let tokens: Vec<String> = line.split_whitespace().map(|t| t.to_ascii_lowercase()).collect();
    if tokens.len() != 5 || tokens[0] != "%%matrixmarket" || tokens[1] != "matrix" {
        return Err(parse_err(line_no, "expected header '%%MatrixMarket matrix <storage> <field> <symmetry>'"));
    }
    let storage = match tokens[2].as_str() {
        "array" => Storage::Array,
        "coordinate" => Storage::Coordinate,
        s => return Err(parse_err(line_no, format!("unknown storage {s:?}"))),
    };
    let field = match tokens[3].as_str() {
        "real" | "double" => Field::Real,
        "complex" => Field::Complex,
        "integer" => Field::Integer,
        "pattern" => Field::Pattern,
        s => return Err(parse_err(line_no, format!("unknown field {s:?}"))),
    };
    let symmetry = match tokens[4].as_str() {
        "general" => Symmetry::General,
        "symmetric" => Symmetry::Symmetric,
        "hermitian" => Symmetry::Hermitian,
        "skew-symmetric" => Symmetry::SkewSymmetric,
        s => return Err(parse_err(line_no, format!("unknown symmetry {s:?}"))),
    };
    if storage == Storage::Array && field == Field::Pattern {
        return Err(parse_err(line_no, "pattern field is only valid with coordinate storage"));
    }
    if symmetry == Symmetry::Hermitian && field != Field::Complex {
        return Err(parse_err(line_no, "hermitian symmetry requires a complex field"));
    }
    if symmetry == Symmetry::SkewSymmetric && field == Field::Pattern {
        return Err(parse_err(line_no, "skew-symmetric symmetry cannot be used with a pattern field"));
    }
    Ok((storage, field, symmetry))
}

fn parse_usize(line_no: usize, tok: &str, what: &str) -> Result<usize> {
    tok.parse().map_err(|_| parse_err(line_no, format!("invalid {what} {tok:?}")))
}

fn parse_f64(line_no: usize, tok: &str) -> Result<f64> {
    let v: f64 = tok.parse().map_err(|_| parse_err(line_no, format!("invalid number {tok:?}")))?;
    if !v.is_finite() {
        return Err(parse_err(line_no, format!("non-finite value {tok:?}")));
    }
    Ok(v)
}

fn parse_value(line_no: usize, tokens: &[&str], field: Field) -> Result<Complex64> {
    let expected = match field {
        Field::Pattern => 0,
        Field::Real | Field::Integer => 1,
        Field::Complex => 2,
    };
    if tokens.len() != expected {
        return Err(parse_err(line_no, format!("expected {expected} value token(s), found {}", tokens.len())));
    }
    match field {
        Field::Pattern => Ok(Complex64::new(1.0, 0.0)),
        Field::Integer => {
            let v: i64 = tokens[0].parse().map_err(|_| parse_err(line_no, format!("invalid integer {:?}", tokens[0])))?;
            Ok(Complex64::new(v as f64, 0.0))
        }
        Field::Real => Ok(Complex64::new(parse_f64(line_no, tokens[0])?, 0.0)),
        Field::Complex => Ok(Complex64::new(parse_f64(line_no, tokens[0])?, parse_f64(line_no, tokens[1])?)),
    }
}

/// Stores `v` at `(i, j)` and its mirror image according to `symmetry`.
fn place(a: &mut Matrix, i: usize, j: usize, v: Complex64, symmetry: Symmetry, line_no: usize) -> Result<()> {
    match symmetry {
        Symmetry::General => {}
        _ if i < j => return Err(parse_err(line_no, "entry above the diagonal in a symmetric-storage file")),
        Symmetry::SkewSymmetric if i == j => {
            return Err(parse_err(line_no, "diagonal entry in a skew-symmetric file"));
        }
        Symmetry::Hermitian if i == j && v.im != 0.0 => {
            return Err(parse_err(line_no, "non-real diagonal entry in a hermitian file"));
        }
        _ => {}
    }
    a[(i, j)] += v;
    if i != j {
        match symmetry {
            Symmetry::General => {}
            Symmetry::Symmetric => a[(j, i)] += v,
            Symmetry::Hermitian => a[(j, i)] += v.conj(),
            Symmetry::SkewSymmetric => a[(j, i)] -= v,
        }
    }
    Ok(())
}

/// Parses Matrix Market text into a dense matrix.
pub fn parse_matrix_market(text: &str) -> Result<Matrix> {
    let mut lines = text.lines().enumerate().map(|(k, l)| (k + 1, l));
    let (header_no, header) = lines.next().ok_or_else(|| parse_err(1, "empty file"))?;
    let (storage, field, symmetry) = parse_header(header_no, header)?;

    let mut body = lines.filter(|(_, l)| {
        let t = l.trim();
        !t.is_empty() && !t.starts_with('%')
    });
    let (size_no, size_line) = body.next().ok_or_else(|| parse_err(header_no, "missing size line"))?;
    let size: Vec<&str> = size_line.split_whitespace().collect();
    let want = if storage == Storage::Array { 2 } else { 3 };
    if size.len() != want {
        return Err(parse_err(size_no, format!("size line needs {want} integers")));
    }
    let m = parse_usize(size_no, size[0], "row count")?;
    let n = parse_usize(size_no, size[1], "column count")?;
    if m == 0 || n == 0 {
        return Err(parse_err(size_no, "matrix dimensions must be positive"));
    }
    if symmetry != Symmetry::General && m != n {
        return Err(parse_err(size_no, "symmetric storage requires a square matrix"));
    }
    let mut a = Matrix::zeros(m, n);

    match storage {
        Storage::Array => {
            // Column-major; symmetric storage lists the lower triangle only
            // (strictly lower for skew-symmetric).
            let positions: Vec<(usize, usize)> = (0..n)
                .flat_map(|j| {
                    let start = match symmetry {
                        Symmetry::General => 0,
                        Symmetry::SkewSymmetric => j + 1,
                        _ => j,
                    };
                    (start..m).map(move |i| (i, j))
                })
                .collect();
            let mut count = 0;
            for (line_no, line) in body {
                let tokens: Vec<&str> = line.split_whitespace().collect();
                let &(i, j) = positions
                    .get(count)
                    .ok_or_else(|| parse_err(line_no, format!("more than {} entries", positions.len())))?;
                let v = parse_value(line_no, &tokens, field)?;
                place(&mut a, i, j, v, symmetry, line_no)?;
                count += 1;
            }
            if count != positions.len() {
                return Err(parse_err(text.lines().count(), format!("expected {} entries, found {count}", positions.len())));
            }
        }
        Storage::Coordinate => {
            let nnz = parse_usize(size_no, size[2], "entry count")?;
            let mut count = 0;
            for (line_no, line) in body {
                let tokens: Vec<&str> = line.split_whitespace().collect();
                if tokens.len() < 2 {
                    return Err(parse_err(line_no, "expected 'row col [value]'"));
                }
                let i = parse_usize(line_no, tokens[0], "row index")?;
                let j = parse_usize(line_no, tokens[1], "column index")?;
                if i == 0 || j == 0 || i > m || j > n {
                    return Err(parse_err(line_no, format!("index ({i}, {j}) outside {m}×{n}")));
                }
                if count == nnz {
                    return Err(parse_err(line_no, format!("more than the declared {nnz} entries")));
                }
                let v = parse_value(line_no, &tokens[2..], field)?;
                place(&mut a, i - 1, j - 1, v, symmetry, line_no)?;
                count += 1;
            }
            if count != nnz {
                return Err(parse_err(text.lines().count(), format!("expected {nnz} entries, found {count}")));
            }
        }
    }
    Ok(a)
}

pub fn read_matrix(path: impl AsRef<Path>) -> Result<Matrix> {
    parse_matrix_market(&fs::read_to_string(path)?)
}

fn push_value(out: &mut String, v: Complex64, complex: bool) {
    if complex {
        let _ = writeln!(out, "{:.16e} {:.16e}", v.re, v.im);
    } else {
        let _ = writeln!(out, "{:.16e}", v.re);
    }
}

/// Formats `a` as a `general` Matrix Market file; real matrices use the
/// `real` field.
pub fn format_matrix_market(a: &Matrix, format: MatrixFormat) -> String {
    let complex = !is_real(a);
    let field = if complex { "complex" } else { "real" };
    let (m, n) = a.shape();
    let mut out = String::new();
    match format {
        MatrixFormat::Dense => {
            let _ = writeln!(out, "%%MatrixMarket matrix array {field} general");
            let _ = writeln!(out, "{m} {n}");
            for v in a.iter() {
                push_value(&mut out, *v, complex);
            }
        }
        MatrixFormat::Coordinate => {
            let entries: Vec<(usize, usize)> =
                (0..m).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|&(i, j)| a[(i, j)] != Complex64::ZERO).collect();
            let _ = writeln!(out, "%%MatrixMarket matrix coordinate {field} general");
            let _ = writeln!(out, "{m} {n} {}", entries.len());
            for (i, j) in entries {
                let _ = write!(out, "{} {} ", i + 1, j + 1);
                push_value(&mut out, a[(i, j)], complex);
            }
        }
    }
    out
}

pub fn write_matrix(a: &Matrix, path: impl AsRef<Path>, format: MatrixFormat) -> Result<()> {
    fs::write(path, format_matrix_market(a, format))?;
    Ok(())
}

/// Coordinate file with an integer `1` at every position of the pattern.
pub fn format_pattern(z: &Pattern) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "%%MatrixMarket matrix coordinate integer general");
    let _ = writeln!(out, "{} {} {}", z.rows(), z.cols(), z.nnz());
    for (i, j) in z.free_positions() {
        let _ = writeln!(out, "{} {} 1", i + 1, j + 1);
    }
    out
}

pub fn write_pattern(z: &Pattern, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, format_pattern(z))?;
    Ok(())
}

/// Reads any Matrix Market file as a pattern (nonzero entries are ones).
pub fn read_pattern(path: impl AsRef<Path>) -> Result<Pattern> {
    Ok(Pattern::nonzero_indicator(&read_matrix(path)?))
}

pub fn write_report(report: &Report, path: impl AsRef<Path>) -> Result<()> {
    let json = serde_json::to_string_pretty(report).map_err(|e| Error::InvalidInput(e.to_string()))?;
    fs::write(path, json + "\n")?;
    Ok(())
}

pub fn read_report(path: impl AsRef<Path>) -> Result<Report> {
    let text = fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| Error::Parse { line: e.line(), msg: e.to_string() })
}
