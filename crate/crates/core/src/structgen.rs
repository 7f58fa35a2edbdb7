//! Test matrices: the cosine matrix, the exchange / symplectic / cyclic
//! permutation-like matrices, and seeded random members of each structured
//! class.
//!
//! Randomness comes from ChaCha8 (`rand_chacha::ChaCha8Rng::seed_from_u64`),
//! with real and imaginary parts drawn uniformly from `[-1, 1)`, so a fixed
//! seed reproduces the same matrix on every platform.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// `A[i][j] = cos(3^¼·√i·j)⁵` with 1-based `i`, `j`.
pub fn cos_test_matrix(n: usize) -> Matrix {
    let root = 3f64.powf(0.25);
    Matrix::from_fn(n, n, |i, j| {
        let (i, j) = ((i + 1) as f64, (j + 1) as f64);
        c((root * i.sqrt() * j).cos().powi(5))
    })
}

/// `J_m`: ones on the anti-diagonal.
pub fn exchange_matrix(m: usize) -> Matrix {
    Matrix::from_fn(m, m, |i, j| c(if i + j == m - 1 { 1.0 } else { 0.0 }))
}

/// `K_m = [[0, I], [−I, 0]]` for even `m`.
pub fn symplectic_matrix(m: usize) -> Result<Matrix> {
    if m == 0 || m % 2 == 1 {
        return Err(Error::InvalidParameter(format!("symplectic matrix needs a positive even size, got {m}")));
    }
    let h = m / 2;
    Ok(Matrix::from_fn(m, m, |i, j| {
        if i < h && j == i + h {
            c(1.0)
        } else if i >= h && j + h == i {
            c(-1.0)
        } else {
            c(0.0)
        }
    }))
}

/// `C±_m`: identity on the superdiagonal and `±1` in the bottom-left corner.
pub fn cyclic_matrix(m: usize, sign: i32) -> Result<Matrix> {
    if m == 0 {
        return Err(Error::InvalidParameter("cyclic matrix needs a positive size".into()));
    }
    let corner = match sign {
        1 => 1.0,
        -1 => -1.0,
        _ => return Err(Error::InvalidParameter(format!("cyclic sign must be +1 or -1, got {sign}"))),
    };
    Ok(Matrix::from_fn(m, m, |i, j| {
        if i + 1 == m && j == 0 {
            c(corner)
        } else if j == i + 1 {
            c(1.0)
        } else {
            c(0.0)
        }
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GenKind {
    Cos,
    Exchange,
    Symplectic,
    CyclicPlus,
    CyclicMinus,
    Centrosymmetric,
    SkewCentrosymmetric,
    Circulant,
    SkewCirculant,
    ComplexSymmetric,
    SkewComplexSymmetric,
    Hamiltonian,
    SkewHamiltonian,
    Hermitian,
    SkewHermitian,
    Persymmetric,
    SkewPersymmetric,
    SymmetricReal,
    SkewSymmetricReal,
}

impl GenKind {
    pub const ALL: [GenKind; 19] = [
        GenKind::Cos,
        GenKind::Exchange,
        GenKind::Symplectic,
        GenKind::CyclicPlus,
        GenKind::CyclicMinus,
        GenKind::Centrosymmetric,
        GenKind::SkewCentrosymmetric,
        GenKind::Circulant,
        GenKind::SkewCirculant,
        GenKind::ComplexSymmetric,
        GenKind::SkewComplexSymmetric,
        GenKind::Hamiltonian,
        GenKind::SkewHamiltonian,
        GenKind::Hermitian,
        GenKind::SkewHermitian,
        GenKind::Persymmetric,
        GenKind::SkewPersymmetric,
        GenKind::SymmetricReal,
        GenKind::SkewSymmetricReal,
    ];

    /// The fourteen structured classes.
    pub const STRUCTURED: [GenKind; 14] = [
        GenKind::Centrosymmetric,
        GenKind::SkewCentrosymmetric,
        GenKind::Circulant,
        GenKind::SkewCirculant,
        GenKind::ComplexSymmetric,
        GenKind::SkewComplexSymmetric,
        GenKind::Hamiltonian,
        GenKind::SkewHamiltonian,
        GenKind::Hermitian,
        GenKind::SkewHermitian,
        GenKind::Persymmetric,
        GenKind::SkewPersymmetric,
        GenKind::SymmetricReal,
        GenKind::SkewSymmetricReal,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GenKind::Cos => "cos40",
            GenKind::Exchange => "exchange",
            GenKind::Symplectic => "symplectic",
            GenKind::CyclicPlus => "cyclic_plus",
            GenKind::CyclicMinus => "cyclic_minus",
            GenKind::Centrosymmetric => "centrosymmetric",
            GenKind::SkewCentrosymmetric => "skew_centrosymmetric",
            GenKind::Circulant => "circulant",
            GenKind::SkewCirculant => "skew_circulant",
            GenKind::ComplexSymmetric => "complex_symmetric",
            GenKind::SkewComplexSymmetric => "skew_complex_symmetric",
            GenKind::Hamiltonian => "hamiltonian",
            GenKind::SkewHamiltonian => "skew_hamiltonian",
            GenKind::Hermitian => "hermitian",
            GenKind::SkewHermitian => "skew_hermitian",
            GenKind::Persymmetric => "persymmetric",
            GenKind::SkewPersymmetric => "skew_persymmetric",
            GenKind::SymmetricReal => "symmetric_real",
            GenKind::SkewSymmetricReal => "skew_symmetric_real",
        }
    }

    pub fn needs_even_size(self) -> bool {
        matches!(self, GenKind::Symplectic | GenKind::Hamiltonian | GenKind::SkewHamiltonian)
    }
}

impl fmt::Display for GenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GenKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('-', "_");
        let key = match key.as_str() {
            "cos" => "cos40",
            "symmetric" => "symmetric_real",
            "skew_symmetric" => "skew_symmetric_real",
            other => other,
        };
        GenKind::ALL
            .into_iter()
            .find(|k| k.name() == key)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown matrix kind {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenSpec {
    pub kind: GenKind,
    pub size: usize,
    pub seed: u64,
    pub rank_deficiency: usize,
}

impl GenSpec {
    pub fn new(kind: GenKind, size: usize, seed: u64) -> Self {
        GenSpec { kind, size, seed, rank_deficiency: 0 }
    }

    pub fn validate(&self) -> Result<()> {
        if self.size == 0 {
            return Err(Error::InvalidParameter("size must be positive".into()));
        }
        if self.kind.needs_even_size() && self.size % 2 == 1 {
            return Err(Error::InvalidParameter(format!("{} needs an even size, got {}", self.kind, self.size)));
        }
        if self.rank_deficiency >= self.size {
            return Err(Error::InvalidParameter(format!(
                "rank deficiency {} must be below the size {}",
                self.rank_deficiency, self.size
            )));
        }
        Ok(())
    }
}

fn random_complex(rng: &mut ChaCha8Rng, n: usize) -> Matrix {
    // Column-major fill order.
    Matrix::from_fn(n, n, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

fn random_real(rng: &mut ChaCha8Rng, n: usize) -> Matrix {
    Matrix::from_fn(n, n, |_, _| c(rng.gen_range(-1.0..1.0)))
}

fn half(z: Complex64) -> Complex64 {
    z * 0.5
}

/// Random `h × h` Hermitian (`sign = 1`) or skew-Hermitian (`sign = −1`) block.
fn hermitian_block(rng: &mut ChaCha8Rng, h: usize, sign: f64) -> Matrix {
    let g = random_complex(rng, h);
    Matrix::from_fn(h, h, |i, j| half(g[(i, j)] + g[(j, i)].conj() * sign))
}

/// Seeded random matrix of the given kind, followed by optional rank
/// deficiency injection. Structured kinds satisfy their defining identity
/// exactly.
pub fn random_member(spec: &GenSpec) -> Result<Matrix> {
    spec.validate()?;
    let n = spec.size;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let flip = n - 1;
    let a = match spec.kind {
        GenKind::Cos => cos_test_matrix(n),
        GenKind::Exchange => exchange_matrix(n),
        GenKind::Symplectic => symplectic_matrix(n)?,
        GenKind::CyclicPlus => cyclic_matrix(n, 1)?,
        GenKind::CyclicMinus => cyclic_matrix(n, -1)?,
        GenKind::Hermitian | GenKind::SkewHermitian => {
            let sign = if spec.kind == GenKind::Hermitian { 1.0 } else { -1.0 };
            hermitian_block(&mut rng, n, sign)
        }
        GenKind::ComplexSymmetric | GenKind::SkewComplexSymmetric => {
            let sign = if spec.kind == GenKind::ComplexSymmetric { 1.0 } else { -1.0 };
            let g = random_complex(&mut rng, n);
            Matrix::from_fn(n, n, |i, j| half(g[(i, j)] + g[(j, i)] * sign))
        }
        GenKind::SymmetricReal | GenKind::SkewSymmetricReal => {
            let sign = if spec.kind == GenKind::SymmetricReal { 1.0 } else { -1.0 };
            let g = random_real(&mut rng, n);
            Matrix::from_fn(n, n, |i, j| half(g[(i, j)] + g[(j, i)] * sign))
        }
        GenKind::Centrosymmetric | GenKind::SkewCentrosymmetric => {
            let sign = if spec.kind == GenKind::Centrosymmetric { 1.0 } else { -1.0 };
            let g = random_complex(&mut rng, n);
            Matrix::from_fn(n, n, |i, j| half(g[(i, j)] + g[(flip - i, flip - j)] * sign))
        }
        GenKind::Persymmetric | GenKind::SkewPersymmetric => {
            let sign = if spec.kind == GenKind::Persymmetric { 1.0 } else { -1.0 };
            let g = random_complex(&mut rng, n);
            Matrix::from_fn(n, n, |i, j| half(g[(i, j)] + g[(flip - j, flip - i)].conj() * sign))
        }
        GenKind::Circulant | GenKind::SkewCirculant => {
            let first: Vec<Complex64> =
                (0..n).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
            let skew = spec.kind == GenKind::SkewCirculant;
            Matrix::from_fn(n, n, |i, j| {
                if j >= i {
                    first[j - i]
                } else if skew {
                    -first[j + n - i]
                } else {
                    first[j + n - i]
                }
            })
        }
        GenKind::Hamiltonian | GenKind::SkewHamiltonian => {
            // [[E, F], [G, ∓Eᴴ]] with F, G Hermitian (Hamiltonian) or
            // skew-Hermitian (skew-Hamiltonian).
            let h = n / 2;
            let (sign, corner) = if spec.kind == GenKind::Hamiltonian { (1.0, -1.0) } else { (-1.0, 1.0) };
            let e = random_complex(&mut rng, h);
            let f = hermitian_block(&mut rng, h, sign);
            let g = hermitian_block(&mut rng, h, sign);
            Matrix::from_fn(n, n, |i, j| match (i < h, j < h) {
                (true, true) => e[(i, j)],
                (true, false) => f[(i, j - h)],
                (false, true) => g[(i - h, j)],
                (false, false) => e[(j - h, i - h)].conj() * corner,
            })
        }
    };
    if spec.rank_deficiency > 0 {
        inject_rank_deficiency(&a, spec.rank_deficiency)
    } else {
        Ok(a)
    }
}

/// Zeroes the `k` smallest singular values of `a` and recomposes it.
pub fn inject_rank_deficiency(a: &Matrix, k: usize) -> Result<Matrix> {
    let min_dim = a.nrows().min(a.ncols());
    if k >= min_dim {
        return Err(Error::InvalidParameter(format!("cannot remove {k} of {min_dim} singular values")));
    }
    if k == 0 {
        return Ok(a.clone());
    }
    let real = linalg::is_real(a);
    let truncate = |sv: &mut nalgebra::DVector<f64>| {
        for s in sv.iter_mut().skip(min_dim - k) {
            *s = 0.0;
        }
    };
    if real {
        let mut svd = linalg::svd(linalg::to_field::<f64>(a))?;
        truncate(&mut svd.singular_values);
        let r: DMatrix<f64> = svd.recompose().map_err(|e| Error::NumericFailure(e.into()))?;
        Ok(linalg::to_complex(&r))
    } else {
        let mut svd = linalg::svd(a.clone())?;
        truncate(&mut svd.singular_values);
        svd.recompose().map_err(|e| Error::NumericFailure(e.into()))
    }
}
