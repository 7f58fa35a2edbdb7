//! Command-line front end for `specsparse`.
//!
//! Exit codes: 0 on success, 1 for invalid input or arguments, 2 when a
//! numerical step fails.

use std::io::Write;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use specsparse::diagnostics::{build_report, Report};
use specsparse::io::{self, MatrixFormat};
use specsparse::pattern::{default_min_nonzeros, matrix_pattern};
use specsparse::spectral::{factorize, KAPPA_WARN_THRESHOLD};
use specsparse::structgen::{random_member, GenKind, GenSpec};
use specsparse::sweep::{run_sweep, to_csv};
use specsparse::{Error, LpParams, Matrix, SparsifyParams};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_NUMERIC: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "specsparse", version, about = "Sparsify dense matrices while keeping their null-spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute the sparsity pattern of a matrix.
    Pattern(PatternArgs),
    /// Sparsify a matrix and write the result.
    Sparsify(SparsifyArgs),
    /// Sparsify a matrix and print the full diagnostic report.
    Diagnose(DiagnoseArgs),
    /// Generate a test matrix.
    Gen(GenArgs),
    /// Sparsify over a grid of (p, q) values and emit CSV.
    Sweep(SweepArgs),
}

#[derive(Debug, Args)]
struct Common {
    /// Input matrix (Matrix Market).
    #[arg(long)]
    input: PathBuf,
    /// Lp exponent in [0, inf]; `inf` selects the max-norm.
    #[arg(long, default_value = "1", value_parser = parse_p)]
    p: f64,
    /// Fraction of the measure to retain, in [0, 1].
    #[arg(long, default_value_t = 0.8)]
    q: f64,
    /// Relative rank cutoff; defaults to max(m, n)·eps.
    #[arg(long)]
    rank_tol: Option<f64>,
    /// Minimum nonzeros kept per row.
    #[arg(long)]
    n_row: Option<usize>,
    /// Minimum nonzeros kept per column.
    #[arg(long)]
    n_col: Option<usize>,
}

impl Common {
    fn params(&self) -> SparsifyParams {
        SparsifyParams {
            rank_tol: self.rank_tol,
            n_row_override: self.n_row,
            n_col_override: self.n_col,
            ..SparsifyParams::new(self.p, self.q)
        }
    }
}

#[derive(Debug, Args)]
struct PatternArgs {
    #[command(flatten)]
    common: Common,
    /// Pattern file to write.
    #[arg(long, alias = "pattern-out")]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SparsifyArgs {
    #[command(flatten)]
    common: Common,
    /// Where to write the sparse matrix.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Where to write the pattern.
    #[arg(long)]
    pattern_out: Option<PathBuf>,
    /// Where to write the JSON report.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Matrix Market layout of the output: coordinate or dense.
    #[arg(long, default_value = "coordinate", value_parser = parse_format)]
    format: MatrixFormat,
}

#[derive(Debug, Args)]
struct DiagnoseArgs {
    #[command(flatten)]
    common: Common,
    /// Also write the JSON report here.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct GenArgs {
    /// Matrix kind, e.g. cos40, hermitian, circulant, hamiltonian.
    #[arg(long, value_parser = parse_kind)]
    kind: GenKind,
    #[arg(long)]
    size: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of trailing singular values to zero.
    #[arg(long, default_value_t = 0)]
    rank_deficiency: usize,
    #[arg(long)]
    output: PathBuf,
    /// Matrix Market layout: dense or coordinate.
    #[arg(long, default_value = "dense", value_parser = parse_format)]
    format: MatrixFormat,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long)]
    input: PathBuf,
    /// Comma-separated p values.
    #[arg(long, value_delimiter = ',', value_parser = parse_p, required = true)]
    p_list: Vec<f64>,
    /// Comma-separated q values.
    #[arg(long, value_delimiter = ',', required = true)]
    q_list: Vec<f64>,
    #[arg(long)]
    rank_tol: Option<f64>,
    /// CSV destination; standard output when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
}

fn parse_p(s: &str) -> Result<f64, String> {
    match s.trim().to_ascii_lowercase().as_str() {
        "inf" | "infinity" => Ok(f64::INFINITY),
        t => t.parse::<f64>().map_err(|e| format!("{e}")),
    }
}

fn parse_format(s: &str) -> Result<MatrixFormat, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_kind(s: &str) -> Result<GenKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Formats `v` with four significant digits.
pub fn sig4(v: f64) -> String {
    if !v.is_finite() {
        return format!("{v}");
    }
    if v == 0.0 {
        return "0".into();
    }
    let mag = v.abs().log10().floor() as i32;
    if (-4..6).contains(&mag) {
        format!("{:.*}", (3 - mag).max(0) as usize, v)
    } else {
        format!("{v:.3e}")
    }
}

fn opt4(v: Option<f64>) -> String {
    v.map(sig4).unwrap_or_else(|| "n/a".into())
}

/// One-line summary of a report.
pub fn summary_line(r: &Report) -> String {
    format!(
        "nnz={} density={} j_min={} cond_x={} cond_pinva_x={} cond_x_pinva={}",
        r.nnz_x,
        sig4(r.density_x),
        sig4(r.j_min),
        opt4(r.cond_x),
        opt4(r.cond_pinva_x),
        opt4(r.cond_x_pinva)
    )
}

fn read_input(path: &PathBuf, err: &mut dyn Write) -> Result<Matrix, Error> {
    let a = io::read_matrix(path)?;
    if let Ok(f) = factorize(&a, specsparse::spectral::default_rank_tol(a.nrows(), a.ncols())) {
        if f.is_ill_conditioned(KAPPA_WARN_THRESHOLD) {
            let _ = writeln!(
                err,
                "warning: condition number {} exceeds {}; the near null-space is unreliable",
                sig4(f.kappa.unwrap_or(f64::INFINITY)),
                sig4(KAPPA_WARN_THRESHOLD)
            );
        }
    }
    Ok(a)
}

fn cmd_pattern(args: &PatternArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), Error> {
    let a = read_input(&args.common.input, err)?;
    let params = args.common.params();
    let f = factorize(&a, params.rank_tol_for(a.nrows(), a.ncols()))?;
    let (n_row, n_col) = default_min_nonzeros(&f);
    let lp = LpParams::new(params.p, params.q, args.common.n_row.unwrap_or(n_row), args.common.n_col.unwrap_or(n_col));
    let z = matrix_pattern(&a, &lp)?;
    if let Some(path) = &args.output {
        io::write_pattern(&z, path)?;
    }
    let _ = writeln!(out, "nnz={} density={}", z.nnz(), sig4(z.nnz() as f64 / (z.rows() * z.cols()) as f64));
    Ok(())
}

fn sparsify_and_report(common: &Common, err: &mut dyn Write) -> Result<(specsparse::SparsifyOutcome, Report), Error> {
    let a = read_input(&common.input, err)?;
    let params = common.params();
    let outcome = specsparse::sparsifier::sparsify(&a, &params)?;
    let report = build_report(&a, &outcome, &params)?;
    Ok((outcome, report))
}

fn cmd_sparsify(args: &SparsifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), Error> {
    let (outcome, report) = sparsify_and_report(&args.common, err)?;
    if let Some(path) = &args.output {
        io::write_matrix(&outcome.x, path, args.format)?;
    }
    if let Some(path) = &args.pattern_out {
        io::write_pattern(&outcome.pattern, path)?;
    }
    if let Some(path) = &args.report {
        io::write_report(&report, path)?;
    }
    let _ = writeln!(out, "{}", summary_line(&report));
    Ok(())
}

fn cmd_diagnose(args: &DiagnoseArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), Error> {
    let (_, report) = sparsify_and_report(&args.common, err)?;
    if let Some(path) = &args.report {
        io::write_report(&report, path)?;
    }
    let json = serde_json::to_string_pretty(&report).map_err(|e| Error::InvalidInput(e.to_string()))?;
    let _ = writeln!(out, "{json}");
    Ok(())
}

fn cmd_gen(args: &GenArgs, out: &mut dyn Write) -> Result<(), Error> {
    let spec = GenSpec { kind: args.kind, size: args.size, seed: args.seed, rank_deficiency: args.rank_deficiency };
    let a = random_member(&spec)?;
    io::write_matrix(&a, &args.output, args.format)?;
    let _ = writeln!(out, "wrote {} {}x{} to {}", args.kind, a.nrows(), a.ncols(), args.output.display());
    Ok(())
}

fn cmd_sweep(args: &SweepArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), Error> {
    let a = read_input(&args.input, err)?;
    let rows = run_sweep(&a, &args.p_list, &args.q_list, args.rank_tol)?;
    let csv = to_csv(&rows);
    match &args.output {
        Some(path) => std::fs::write(path, csv)?,
        None => {
            let _ = write!(out, "{csv}");
        }
    }
    Ok(())
}

/// Parses `args` (including the program name) and executes the command,
/// writing normal output to `out` and diagnostics to `err`.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_INVALID
                }
            };
        }
    };
    let result = match &cli.command {
        Command::Pattern(a) => cmd_pattern(a, out, err),
        Command::Sparsify(a) => cmd_sparsify(a, out, err),
        Command::Diagnose(a) => cmd_diagnose(a, out, err),
        Command::Gen(a) => cmd_gen(a, out),
        Command::Sweep(a) => cmd_sweep(a, out, err),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    if e.is_numeric() || matches!(e, Error::UndefinedCondition(_)) {
        EXIT_NUMERIC
    } else {
        EXIT_INVALID
    }
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    run_with(args, &mut std::io::stdout(), &mut std::io::stderr())
}
