//! Dense kernels shared by the public modules.

use nalgebra::{ComplexField, DMatrix, Schur, SVD};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense complex matrix, the value type for every input and output.
pub type Matrix = DMatrix<Complex64>;

const SVD_MAX_ITER_PER_DIM: usize = 200;

/// Scalar fields the solver runs in. Real inputs stay in `f64` end to end.
pub(crate) trait Field: ComplexField<RealField = f64> + Copy {
    fn to_c64(self) -> Complex64;
    fn from_c64(z: Complex64) -> Self;
}

impl Field for f64 {
    fn to_c64(self) -> Complex64 {
        Complex64::new(self, 0.0)
    }
    fn from_c64(z: Complex64) -> Self {
        z.re
    }
}

impl Field for Complex64 {
    fn to_c64(self) -> Complex64 {
        self
    }
    fn from_c64(z: Complex64) -> Self {
        z
    }
}

pub(crate) fn to_field<T: Field>(a: &Matrix) -> DMatrix<T> {
    a.map(T::from_c64)
}

pub(crate) fn to_complex<T: Field>(a: &DMatrix<T>) -> Matrix {
    a.map(T::to_c64)
}

/// Frobenius norm.
pub fn frobenius(a: &Matrix) -> f64 {
    a.norm()
}

/// True when every entry has an exactly zero imaginary part.
pub fn is_real(a: &Matrix) -> bool {
    a.iter().all(|z| z.im == 0.0)
}

pub(crate) fn check_finite(a: &Matrix) -> Result<()> {
    if a.nrows() == 0 || a.ncols() == 0 {
        return Err(Error::InvalidInput("matrix must have at least one row and column".into()));
    }
    if let Some(pos) = a.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
        let (i, j) = (pos % a.nrows(), pos / a.nrows());
        return Err(Error::InvalidInput(format!("non-finite entry at ({i}, {j})")));
    }
    Ok(())
}

/// Convergence tolerance for nalgebra's implicit-shift SVD, its own default.
const SVD_EPS: f64 = 5.0 * f64::EPSILON;

/// Accepted relative reconstruction error per unit of `max(m, n)`.
const SVD_RECON_TOL: f64 = 1e3 * f64::EPSILON;

fn svd_once<T: Field>(a: DMatrix<T>) -> Option<SVD<T, nalgebra::Dyn, nalgebra::Dyn>> {
    let (m, n) = a.shape();
    SVD::try_new(a, true, true, SVD_EPS, SVD_MAX_ITER_PER_DIM * (m + n))
}

fn reconstructs<T: Field>(a: &DMatrix<T>, s: &SVD<T, nalgebra::Dyn, nalgebra::Dyn>) -> bool {
    let (Some(u), Some(v_t)) = (&s.u, &s.v_t) else { return false };
    let scaled = u * DMatrix::from_diagonal(&s.singular_values.map(T::from_real));
    let err = (scaled * v_t - a).norm();
    err <= SVD_RECON_TOL * a.shape().0.max(a.shape().1) as f64 * a.norm().max(f64::MIN_POSITIVE)
}

/// Full SVD with singular values in non-increasing order. The implicit-shift
/// factors are checked against the input; nalgebra occasionally returns a
/// wrong decomposition for rank-deficient inputs, in which case one-sided
/// Jacobi is used instead.
pub(crate) fn svd<T: Field>(a: DMatrix<T>) -> Result<SVD<T, nalgebra::Dyn, nalgebra::Dyn>> {
    if let Some(s) = svd_once(a.clone()) {
        if reconstructs(&a, &s) {
            return Ok(s);
        }
    }
    let s = jacobi_svd(&a)?;
    if reconstructs(&a, &s) {
        Ok(s)
    } else {
        let (m, n) = a.shape();
        Err(Error::NumericFailure(format!("SVD of a {m}x{n} matrix did not converge to a valid factorization")))
    }
}

const JACOBI_MAX_SWEEPS: usize = 60;

/// One-sided (Hestenes) Jacobi SVD. Slow but unconditionally accurate.
fn jacobi_svd<T: Field>(a: &DMatrix<T>) -> Result<SVD<T, nalgebra::Dyn, nalgebra::Dyn>> {
    let (m, n) = a.shape();
    if m < n {
        let SVD { u, v_t, singular_values } = jacobi_svd(&a.adjoint())?;
        return Ok(SVD { u: v_t.map(|v| v.adjoint()), v_t: u.map(|u| u.adjoint()), singular_values });
    }
    let mut w = a.clone();
    let mut v = DMatrix::<T>::identity(n, n);
    let mut converged = false;
    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..n {
            for j in i + 1..n {
                let alpha = w.column(i).norm_squared();
                let beta = w.column(j).norm_squared();
                let gamma = w.column(i).dotc(&w.column(j));
                let g = gamma.modulus();
                if g <= f64::EPSILON * (alpha * beta).sqrt() || g == 0.0 {
                    continue;
                }
                rotated = true;
                // Rotate column j by the phase of gamma so the pair is real.
                let phase = (gamma / T::from_real(g)).conjugate();
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = cs * t;
                for mat in [&mut w, &mut v] {
                    for r in 0..mat.nrows() {
                        let xi = mat[(r, i)];
                        let xj = mat[(r, j)] * phase;
                        mat[(r, i)] = xi.scale(cs) - xj.scale(sn);
                        mat[(r, j)] = xi.scale(sn) + xj.scale(cs);
                    }
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NumericFailure(format!("Jacobi SVD of a {m}x{n} matrix did not converge")));
    }

    let norms: Vec<f64> = (0..n).map(|k| w.column(k).norm()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| norms[y].total_cmp(&norms[x]));
    let top = norms.iter().copied().fold(0.0, f64::max);
    let nonzero = order.iter().take_while(|&&k| norms[k] > f64::EPSILON * top * n as f64).count();

    let mut u = DMatrix::<T>::zeros(m, n);
    for (dst, &k) in order.iter().take(nonzero).enumerate() {
        u.set_column(dst, &w.column(k).unscale(norms[k]));
    }
    if nonzero < n {
        // Fill the columns of (numerically) zero singular values with an
        // orthonormal completion of the range.
        let fill = orthogonal_complement(&u.columns(0, nonzero).into_owned());
        u.columns_mut(nonzero, n - nonzero).copy_from(&fill.columns(0, n - nonzero));
    }
    let singular_values = nalgebra::DVector::from_iterator(
        n,
        order.iter().enumerate().map(|(dst, &k)| if dst < nonzero { norms[k] } else { 0.0 }),
    );
    let v_sorted = DMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok(SVD { u: Some(u), v_t: Some(v_sorted.adjoint()), singular_values })
}

/// Singular values in non-increasing order.
pub(crate) fn singular_values(a: &Matrix) -> Result<Vec<f64>> {
    check_finite(a)?;
    let sv = if is_real(a) { svd(to_field::<f64>(a))?.singular_values } else { svd(a.clone())?.singular_values };
    Ok(sv.iter().copied().collect())
}

pub(crate) fn spectral_norm(a: &Matrix) -> Result<f64> {
    Ok(singular_values(a)?.first().copied().unwrap_or(0.0))
}

/// Orthonormal basis of the orthogonal complement of the span of the columns
/// of `basis`, which must already be orthonormal.
pub(crate) fn orthogonal_complement<T: Field>(basis: &DMatrix<T>) -> DMatrix<T> {
    let (dim, k) = basis.shape();
    if k == 0 {
        return DMatrix::identity(dim, dim);
    }
    if k >= dim {
        return DMatrix::zeros(dim, 0);
    }
    // The trailing columns of the full Householder Q of `basis` span its complement.
    let qr = basis.clone().qr();
    let mut q_adj = DMatrix::<T>::identity(dim, dim);
    qr.q_tr_mul(&mut q_adj);
    q_adj.adjoint().columns(k, dim - k).into_owned()
}

/// Eigenvalues of a square matrix through its Schur form.
pub(crate) fn eigenvalues(a: &Matrix) -> Result<Vec<Complex64>> {
    let n = a.nrows();
    if n != a.ncols() {
        return Err(Error::Shape(format!("eigenvalues need a square matrix, got {}x{}", n, a.ncols())));
    }
    check_finite(a)?;
    let max_iter = SVD_MAX_ITER_PER_DIM * 2 * n;
    // A deflation threshold of exactly ε can stall on rounding noise; relax
    // it step by step before giving up.
    for eps in [4.0 * f64::EPSILON, 64.0 * f64::EPSILON, 1e-12] {
        if is_real(a) {
            if let Some(schur) = Schur::try_new(to_field::<f64>(a), eps, max_iter) {
                return Ok(schur.complex_eigenvalues().iter().copied().collect());
            }
        } else if let Some(schur) = Schur::try_new(a.clone(), eps, max_iter) {
            // The complex Schur form is upper triangular.
            let (_, t) = schur.unpack();
            return Ok(t.diagonal().iter().copied().collect());
        }
    }
    Err(Error::NumericFailure(format!("Schur iteration on a {n}x{n} matrix did not converge")))
}
