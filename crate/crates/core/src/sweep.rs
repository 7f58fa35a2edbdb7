//! Parameter sweeps over a `(p, q)` grid.

use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;

use crate::diagnostics::{product_conditions, rel_inverse_diff};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::pattern::validate_pq;
use crate::sparsifier::{sparsify, SparsifyParams};
use crate::spectral::generalized_condition;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub p: f64,
    pub q: f64,
    pub nnz: usize,
    pub density: f64,
    pub j_min: f64,
    pub cond_x: Option<f64>,
    pub cond_pinva_x: Option<f64>,
    pub cond_x_pinva: Option<f64>,
    pub rel_inv_diff: Option<f64>,
}

pub const CSV_HEADER: &str = "p,q,nnz,density,j_min,cond_x,cond_pinva_x,cond_x_pinva,rel_inv_diff";

/// Sparsifies `a` at every grid point. Rows come back sorted by `(p, q)`
/// with duplicates removed, regardless of how the points were scheduled.
pub fn run_sweep(a: &Matrix, p_list: &[f64], q_list: &[f64], rank_tol: Option<f64>) -> Result<Vec<SweepRow>> {
    if p_list.is_empty() || q_list.is_empty() {
        return Err(Error::InvalidParameter("sweep needs at least one p and one q".into()));
    }
    let mut grid: Vec<(f64, f64)> = Vec::with_capacity(p_list.len() * q_list.len());
    for &p in p_list {
        for &q in q_list {
            validate_pq(p, q)?;
            grid.push((p, q));
        }
    }
    grid.sort_by(|x, y| x.partial_cmp(y).expect("validated parameters are not NaN"));
    grid.dedup();

    grid.par_iter().map(|&(p, q)| sweep_point(a, p, q, rank_tol)).collect()
}

fn sweep_point(a: &Matrix, p: f64, q: f64, rank_tol: Option<f64>) -> Result<SweepRow> {
    let params = SparsifyParams { rank_tol, ..SparsifyParams::new(p, q) };
    let out = sparsify(a, &params)?;
    let f = &out.spectral;
    let nnz = out.x.iter().filter(|z| z.norm() != 0.0).count();
    let cond_x = if nnz == 0 { None } else { Some(generalized_condition(&out.x, f.rank_tol)?) };
    let (cond_pinva_x, cond_x_pinva) = product_conditions(&out.x, f, &out.a_pinv)?;
    let rel_inv_diff = if f.rank == 0 { None } else { Some(rel_inverse_diff(&out.x, a, f.rank_tol)?) };
    Ok(SweepRow {
        p,
        q,
        nnz,
        density: nnz as f64 / (a.nrows() * a.ncols()) as f64,
        j_min: out.j_min,
        cond_x,
        cond_pinva_x,
        cond_x_pinva,
        rel_inv_diff,
    })
}

fn num(v: f64) -> String {
    if v.is_infinite() && v > 0.0 {
        "inf".into()
    } else {
        format!("{v}")
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

/// CSV text with [`CSV_HEADER`]; undefined values are empty fields and an
/// infinite `p` is written as `inf`.
pub fn to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            num(r.p),
            num(r.q),
            r.nnz,
            num(r.density),
            num(r.j_min),
            opt(r.cond_x),
            opt(r.cond_pinva_x),
            opt(r.cond_x_pinva),
            opt(r.rel_inv_diff)
        );
    }
    out
}

pub fn write_csv(rows: &[SweepRow], path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, to_csv(rows))?;
    Ok(())
}
