//! Rank-revealing SVD partition, pseudoinverse and generalized condition numbers.
//!
//! `A = [U1 U2] diag(Σr, 0) [V1 V2]ᴴ` where `U1`, `V1` span the ranges of `A`
//! and `Aᴴ`, and `U2`, `V2` span the null-spaces of `Aᴴ` and `A`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, check_finite, is_real, to_complex, to_field, Field, Matrix};

/// Condition number above which callers should warn that the near null-space
/// of the input is too sensitive for sparsification to be meaningful.
pub const KAPPA_WARN_THRESHOLD: f64 = 1e8;

/// Rank tolerance relative to the largest singular value: `max(m, n)·ε`.
pub fn default_rank_tol(rows: usize, cols: usize) -> f64 {
    rows.max(cols) as f64 * f64::EPSILON
}

#[derive(Debug, Clone)]
pub struct SpectralData {
    /// `m × r`, orthonormal basis of the range of `A`.
    pub u1: Matrix,
    /// `m × p_L`, orthonormal basis of the null-space of `Aᴴ`.
    pub u2: Matrix,
    /// `n × r`, orthonormal basis of the range of `Aᴴ`.
    pub v1: Matrix,
    /// `n × p_R`, orthonormal basis of the null-space of `A`.
    pub v2: Matrix,
    /// The `r` retained singular values, non-increasing.
    pub sigma: Vec<f64>,
    pub rank: usize,
    pub rank_tol: f64,
    /// `σ₁/σ_r`; `None` for the zero matrix.
    pub kappa: Option<f64>,
}

impl SpectralData {
    pub fn rows(&self) -> usize {
        self.u1.nrows()
    }

    pub fn cols(&self) -> usize {
        self.v1.nrows()
    }

    /// `p_R = n − r`.
    pub fn right_nullity(&self) -> usize {
        self.v2.ncols()
    }

    /// `p_L = m − r`.
    pub fn left_nullity(&self) -> usize {
        self.u2.ncols()
    }

    pub fn is_full_rank(&self) -> bool {
        self.rank == self.rows().min(self.cols())
    }

    pub fn is_ill_conditioned(&self, threshold: f64) -> bool {
        self.kappa.is_some_and(|k| k > threshold)
    }

    /// `U1·diag(σ)·V1ᴴ`.
    pub fn reconstruct(&self) -> Matrix {
        let s = DVector::from_iterator(self.rank, self.sigma.iter().map(|&s| Complex64::new(s, 0.0)));
        let mut us = self.u1.clone();
        for (k, mut col) in us.column_iter_mut().enumerate() {
            col *= s[k];
        }
        us * self.v1.adjoint()
    }
}

/// Computes the SVD partition of `a` with numerical rank
/// `r = #{σᵢ > rank_tol·σ₁}`.
pub fn factorize(a: &Matrix, rank_tol: f64) -> Result<SpectralData> {
    check_finite(a)?;
    if !(rank_tol >= 0.0) || !rank_tol.is_finite() {
        return Err(Error::InvalidParameter(format!("rank_tol must be a finite nonnegative number, got {rank_tol}")));
    }
    if is_real(a) {
        factorize_in::<f64>(&to_field(a), rank_tol)
    } else {
        factorize_in::<Complex64>(a, rank_tol)
    }
}

fn factorize_in<T: Field>(a: &DMatrix<T>, rank_tol: f64) -> Result<SpectralData> {
    let svd = linalg::svd(a.clone())?;
    let u = svd.u.expect("SVD computed with U");
    let v_t = svd.v_t.expect("SVD computed with Vᴴ");
    let all: Vec<f64> = svd.singular_values.iter().copied().collect();

    let cutoff = rank_tol * all.first().copied().unwrap_or(0.0);
    let rank = all.iter().take_while(|&&s| s > cutoff).count();
    let sigma = all[..rank].to_vec();

    let u1 = u.columns(0, rank).into_owned();
    let v1 = v_t.rows(0, rank).adjoint();
    let u2 = linalg::orthogonal_complement(&u1);
    let v2 = linalg::orthogonal_complement(&v1);

    let kappa = (rank > 0).then(|| sigma[0] / sigma[rank - 1]);
    Ok(SpectralData {
        u1: to_complex(&u1),
        u2: to_complex(&u2),
        v1: to_complex(&v1),
        v2: to_complex(&v2),
        sigma,
        rank,
        rank_tol,
        kappa,
    })
}

/// Moore–Penrose pseudoinverse `V1·diag(1/σ)·U1ᴴ` (`n × m`).
pub fn pseudoinverse(f: &SpectralData) -> Matrix {
    let mut v_scaled = f.v1.clone();
    for (k, mut col) in v_scaled.column_iter_mut().enumerate() {
        col /= Complex64::new(f.sigma[k], 0.0);
    }
    v_scaled * f.u1.adjoint()
}

/// `σ_max/σ_min` over the singular values above `rank_tol·σ_max`, i.e.
/// `‖M‖₂·‖M†‖₂`.
pub fn generalized_condition(m: &Matrix, rank_tol: f64) -> Result<f64> {
    let sv = linalg::singular_values(m)?;
    let top = sv.first().copied().unwrap_or(0.0);
    if top == 0.0 {
        return Err(Error::UndefinedCondition("matrix is zero".into()));
    }
    let cutoff = rank_tol * top;
    let smallest = sv.iter().copied().rev().find(|&s| s > cutoff).unwrap_or(top);
    Ok(top / smallest)
}

/// Eigenvalues with modulus above `zero_tol` times the largest modulus, in no
/// particular order.
pub fn nonzero_eigenvalues(m: &Matrix, zero_tol: f64) -> Result<Vec<Complex64>> {
    let ev = linalg::eigenvalues(m)?;
    let largest = ev.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if largest == 0.0 {
        return Ok(Vec::new());
    }
    Ok(ev.into_iter().filter(|z| z.norm() > zero_tol * largest).collect())
}
