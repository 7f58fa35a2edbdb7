//! Minimum-misfit sparse matrix for a fixed pattern.
//!
//! Solves
//!
//! ```text
//! min_X  ½‖(X − A)A†‖²_F + ½‖A†(X − A)‖²_F
//! s.t.   X·V2 = 0,  Xᴴ·U2 = 0,  X[i,j] = 0 where the pattern is 0
//! ```
//!
//! Only entries on the pattern are unknowns. On those, the Hessian of the
//! misfit is the restriction of the Kronecker sum
//! `(A†A†ᴴ)ᵀ ⊗ I_m + I_n ⊗ A†ᴴA†` and the linear term is `2·A†ᴴ`. The
//! null-space constraints are removed by an orthonormal basis `W` of the
//! kernel of the constraint matrix, leaving the Hermitian positive definite
//! system `Wᴴ·H·W·y = Wᴴ·g`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, is_real, to_complex, to_field, Field, Matrix};
use crate::pattern::{default_min_nonzeros, matrix_pattern, LpParams, Pattern};
use crate::spectral::{self, default_rank_tol, SpectralData};

/// Singular values of the constraint matrix below this fraction of the
/// largest are treated as redundant constraints.
pub const CONSTRAINT_RANK_TOL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct SparsifyParams {
    pub p: f64,
    pub q: f64,
    /// Relative rank cutoff; `None` uses `max(m, n)·ε`.
    pub rank_tol: Option<f64>,
    pub n_row_override: Option<usize>,
    pub n_col_override: Option<usize>,
    /// Use this pattern instead of computing one.
    pub pattern_override: Option<Pattern>,
}

impl Default for SparsifyParams {
    fn default() -> Self {
        SparsifyParams {
            p: 1.0,
            q: 0.8,
            rank_tol: None,
            n_row_override: None,
            n_col_override: None,
            pattern_override: None,
        }
    }
}

impl SparsifyParams {
    pub fn new(p: f64, q: f64) -> Self {
        SparsifyParams { p, q, ..Default::default() }
    }

    pub fn rank_tol_for(&self, rows: usize, cols: usize) -> f64 {
        self.rank_tol.unwrap_or_else(|| default_rank_tol(rows, cols))
    }
}

/// Restricted optimality system over the free entries.
#[derive(Debug, Clone)]
pub struct KktSystem {
    /// Free positions, row-major.
    pub free_index_map: Vec<(usize, usize)>,
    /// `nnz × nnz` Hermitian.
    pub hessian: Matrix,
    /// `2·A†ᴴ` at the free positions.
    pub rhs: DVector<Complex64>,
    /// `(m·p_R + n·p_L) × nnz`: rows `Σ_j X[i,j]·V2[j,k] = 0` for each row
    /// `i` and null vector `k`, then `Σ_i conj(U2[i,k])·X[i,j] = 0` for each
    /// column `j` and left null vector `k`.
    pub constraints: Matrix,
}

#[derive(Debug, Clone)]
pub struct SparsifyOutcome {
    /// The sparse minimizer; exactly zero off the pattern.
    pub x: Matrix,
    pub pattern: Pattern,
    pub j_min: f64,
    /// `‖Wᴴ·(H·x − g)‖` at the solution.
    pub grad_residual: f64,
    /// `max(‖X·V2‖_F, ‖Xᴴ·U2‖_F)`.
    pub nullspace_residual: f64,
    pub spectral: SpectralData,
    pub a_pinv: Matrix,
}

/// `½‖(X − A)A†‖²_F + ½‖A†(X − A)‖²_F`.
pub fn misfit(x: &Matrix, a: &Matrix, a_pinv: &Matrix) -> Result<f64> {
    check_pinv_shape(x, a_pinv)?;
    if x.shape() != a.shape() {
        return Err(Error::Shape(format!("X is {}x{} but A is {}x{}", x.nrows(), x.ncols(), a.nrows(), a.ncols())));
    }
    let d = x - a;
    Ok(0.5 * (&d * a_pinv).norm_squared() + 0.5 * (a_pinv * &d).norm_squared())
}

/// `X·A†A†ᴴ + A†ᴴA†·X − 2·A†ᴴ`, the gradient of [`misfit`] in the sense
/// `dJ = Re⟨G, dX⟩`.
pub fn misfit_gradient(x: &Matrix, a_pinv: &Matrix) -> Result<Matrix> {
    check_pinv_shape(x, a_pinv)?;
    let pinv_h = a_pinv.adjoint();
    Ok(x * (a_pinv * &pinv_h) + (&pinv_h * a_pinv) * x - pinv_h * Complex64::new(2.0, 0.0))
}

fn check_pinv_shape(x: &Matrix, a_pinv: &Matrix) -> Result<()> {
    if a_pinv.nrows() != x.ncols() || a_pinv.ncols() != x.nrows() {
        return Err(Error::Shape(format!(
            "X is {}x{} but the pseudoinverse is {}x{}",
            x.nrows(),
            x.ncols(),
            a_pinv.nrows(),
            a_pinv.ncols()
        )));
    }
    Ok(())
}

struct Assembled<T: Field> {
    free: Vec<(usize, usize)>,
    hessian: DMatrix<T>,
    rhs: DVector<T>,
    constraints: DMatrix<T>,
}

fn assemble<T: Field>(u2: &DMatrix<T>, v2: &DMatrix<T>, a_pinv: &DMatrix<T>, z: &Pattern) -> Assembled<T> {
    let (m, n) = z.shape();
    let free: Vec<(usize, usize)> = z.free_positions().collect();
    let nnz = free.len();
    let pinv_h = a_pinv.adjoint();
    let right = a_pinv * &pinv_h; // n × n
    let left = &pinv_h * a_pinv; // m × m

    let mut hessian = DMatrix::<T>::zeros(nnz, nnz);
    for (col, &(k, l)) in free.iter().enumerate() {
        for (row, &(i, j)) in free.iter().enumerate() {
            let mut h = T::zero();
            if i == k {
                h += right[(l, j)];
            }
            if j == l {
                h += left[(i, k)];
            }
            hessian[(row, col)] = h;
        }
    }
    let two = T::from_real(2.0);
    let rhs = DVector::from_iterator(nnz, free.iter().map(|&(i, j)| pinv_h[(i, j)] * two));

    let (p_r, p_l) = (v2.ncols(), u2.ncols());
    let mut constraints = DMatrix::<T>::zeros(m * p_r + n * p_l, nnz);
    for (col, &(i, j)) in free.iter().enumerate() {
        for k in 0..p_r {
            constraints[(i * p_r + k, col)] = v2[(j, k)];
        }
        for k in 0..p_l {
            constraints[(m * p_r + j * p_l + k, col)] = u2[(i, k)].conjugate();
        }
    }
    Assembled { free, hessian, rhs, constraints }
}

/// Builds the restricted Hessian, right-hand side and null-space constraints
/// for pattern `z`.
pub fn assemble_kkt(f: &SpectralData, a_pinv: &Matrix, z: &Pattern) -> Result<KktSystem> {
    let (m, n) = (f.rows(), f.cols());
    if z.shape() != (m, n) || a_pinv.shape() != (n, m) {
        return Err(Error::Shape(format!(
            "factorization is {m}x{n}, pattern {}x{}, pseudoinverse {}x{}",
            z.rows(),
            z.cols(),
            a_pinv.nrows(),
            a_pinv.ncols()
        )));
    }
    let sys = assemble(&f.u2, &f.v2, a_pinv, z);
    Ok(KktSystem {
        free_index_map: sys.free,
        hessian: sys.hessian,
        rhs: sys.rhs,
        constraints: sys.constraints,
    })
}

/// Orthonormal basis of the kernel of `c`, robust to dependent rows.
fn kernel_basis<T: Field>(c: &DMatrix<T>) -> Result<DMatrix<T>> {
    let nvars = c.ncols();
    if c.nrows() == 0 {
        return Ok(DMatrix::identity(nvars, nvars));
    }
    let svd = linalg::svd(c.adjoint())?;
    let u = svd.u.expect("SVD computed with U");
    let top = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let rank = svd.singular_values.iter().filter(|&&s| s > CONSTRAINT_RANK_TOL * top).count();
    let range = u.columns(0, rank).into_owned();
    Ok(linalg::orthogonal_complement(&range))
}

struct Solved<T: Field> {
    x: DMatrix<T>,
    grad_residual: f64,
}

fn solve_in<T: Field>(u2: &DMatrix<T>, v2: &DMatrix<T>, a_pinv: &DMatrix<T>, z: &Pattern) -> Result<Solved<T>> {
    let (m, n) = z.shape();
    let sys = assemble(u2, v2, a_pinv, z);
    let mut x = DMatrix::<T>::zeros(m, n);
    if sys.free.is_empty() {
        return Ok(Solved { x, grad_residual: 0.0 });
    }

    let w = kernel_basis(&sys.constraints)?;
    let (values, residual) = if w.ncols() == 0 {
        (DVector::zeros(sys.free.len()), 0.0)
    } else {
        let constrained = sys.constraints.nrows() > 0;
        let (reduced, reduced_rhs) = if constrained {
            let hw = &sys.hessian * &w;
            (w.adjoint() * hw, w.adjoint() * &sys.rhs)
        } else {
            (sys.hessian.clone(), sys.rhs.clone())
        };
        let reduced = (&reduced + reduced.adjoint()) * T::from_real(0.5);
        let dim = reduced.nrows();
        let chol = reduced.cholesky().ok_or_else(|| {
            Error::NumericFailure(format!(
                "reduced Hessian of dimension {dim} is not positive definite ({} free entries, {} constraints)",
                sys.free.len(),
                sys.constraints.nrows()
            ))
        })?;
        let y = chol.solve(&reduced_rhs);
        let values = if constrained { &w * y } else { y };
        let grad = &sys.hessian * &values - &sys.rhs;
        let projected = if constrained { (w.adjoint() * grad).norm() } else { grad.norm() };
        (values, projected)
    };
    for (k, &(i, j)) in sys.free.iter().enumerate() {
        x[(i, j)] = values[k];
    }
    Ok(Solved { x, grad_residual: residual })
}

fn solve_with_spectral(a: &Matrix, f: SpectralData, a_pinv: Matrix, z: Pattern) -> Result<SparsifyOutcome> {
    if z.shape() != a.shape() {
        return Err(Error::Shape(format!(
            "pattern is {}x{} but matrix is {}x{}",
            z.rows(),
            z.cols(),
            a.nrows(),
            a.ncols()
        )));
    }
    let (x, grad_residual) = if f.rank == 0 {
        // Only X = 0 is feasible.
        (Matrix::zeros(a.nrows(), a.ncols()), 0.0)
    } else if f.is_full_rank() && Pattern::nonzero_indicator(a).is_subset_of(&z) {
        // A itself is feasible with zero misfit, hence the unique minimizer.
        (a.clone(), 0.0)
    } else if is_real(a) {
        let s = solve_in::<f64>(&to_field(&f.u2), &to_field(&f.v2), &to_field(&a_pinv), &z)?;
        (to_complex(&s.x), s.grad_residual)
    } else {
        let s = solve_in::<Complex64>(&f.u2, &f.v2, &a_pinv, &z)?;
        (s.x, s.grad_residual)
    };

    let j_min = misfit(&x, a, &a_pinv)?;
    let nullspace_residual = (&x * &f.v2).norm().max((x.adjoint() * &f.u2).norm());
    Ok(SparsifyOutcome { x, pattern: z, j_min, grad_residual, nullspace_residual, spectral: f, a_pinv })
}

/// Unique minimizer of the misfit over matrices with pattern `z` that keep
/// the null-spaces of `a`.
pub fn solve_with_pattern(a: &Matrix, z: &Pattern, rank_tol: f64) -> Result<SparsifyOutcome> {
    let f = spectral::factorize(a, rank_tol)?;
    let a_pinv = spectral::pseudoinverse(&f);
    solve_with_spectral(a, f, a_pinv, z.clone())
}

/// Factorize, pick the pattern (unless overridden) and solve.
pub fn sparsify(a: &Matrix, params: &SparsifyParams) -> Result<SparsifyOutcome> {
    let rank_tol = params.rank_tol_for(a.nrows(), a.ncols());
    let f = spectral::factorize(a, rank_tol)?;
    let a_pinv = spectral::pseudoinverse(&f);
    let z = match &params.pattern_override {
        Some(z) => {
            crate::pattern::validate_pq(params.p, params.q)?;
            z.clone()
        }
        None => {
            let (n_row, n_col) = default_min_nonzeros(&f);
            let lp = LpParams::new(
                params.p,
                params.q,
                params.n_row_override.unwrap_or(n_row),
                params.n_col_override.unwrap_or(n_col),
            );
            matrix_pattern(a, &lp)?
        }
    };
    solve_with_spectral(a, f, a_pinv, z)
}

/// Lagrange multipliers of a solution, in the convention
///
/// ```text
/// X·A†A†ᴴ + A†ᴴA†·X + Λ_R·V2ᴴ + U2·Λ_Lᴴ + Λ_Z = 2·A†ᴴ
/// ```
///
/// with `Λ_Z` supported off the pattern. Recovered by a minimum-norm least
/// squares fit of the stationarity residual; for inspection only.
#[derive(Debug, Clone)]
pub struct Multipliers {
    /// `m × p_R`.
    pub right: Matrix,
    /// `n × p_L`.
    pub left: Matrix,
    /// `m × n`, the pattern multipliers `μ_ij`.
    pub pattern: Matrix,
    /// `‖Λ_Z‖` restricted to the free positions; zero at an exact solution.
    pub free_residual: f64,
}

pub fn lagrange_multipliers(outcome: &SparsifyOutcome) -> Result<Multipliers> {
    let f = &outcome.spectral;
    let (m, n) = (f.rows(), f.cols());
    let (p_r, p_l) = (f.right_nullity(), f.left_nullity());
    let sys = assemble_kkt(f, &outcome.a_pinv, &outcome.pattern)?;
    let gradient = misfit_gradient(&outcome.x, &outcome.a_pinv)?;

    let mut right = Matrix::zeros(m, p_r);
    let mut left = Matrix::zeros(n, p_l);
    if sys.constraints.nrows() > 0 && !sys.free_index_map.is_empty() {
        let g_free = DVector::from_iterator(sys.free_index_map.len(), sys.free_index_map.iter().map(|&(i, j)| gradient[(i, j)]));
        // Stationarity on the free entries: g_free = Cᴴ·μ.
        let svd = linalg::svd(sys.constraints.adjoint())?;
        let top = svd.singular_values.iter().copied().fold(0.0, f64::max);
        let mu = svd
            .solve(&g_free, CONSTRAINT_RANK_TOL * top)
            .map_err(|e| Error::NumericFailure(e.to_string()))?;
        for i in 0..m {
            for k in 0..p_r {
                right[(i, k)] = -mu[i * p_r + k];
            }
        }
        for j in 0..n {
            for k in 0..p_l {
                left[(j, k)] = -mu[m * p_r + j * p_l + k].conj();
            }
        }
    }
    let mut pattern = -(gradient + &right * f.v2.adjoint() + &f.u2 * left.adjoint());
    let mut free_sq = 0.0;
    for (i, j) in outcome.pattern.free_positions() {
        free_sq += pattern[(i, j)].norm_sqr();
        pattern[(i, j)] = Complex64::new(0.0, 0.0);
    }
    Ok(Multipliers { right, left, pattern, free_residual: free_sq.sqrt() })
}
