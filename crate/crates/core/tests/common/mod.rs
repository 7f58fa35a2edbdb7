//! Independent reference implementations and random fixtures shared by the
//! integration tests.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use specsparse::pattern::lp_measure;
use specsparse::spectral::{factorize, pseudoinverse};
use specsparse::{Complex64, Matrix, Pattern};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn random_complex(rng: &mut impl Rng, m: usize, n: usize) -> Matrix {
    Matrix::from_fn(m, n, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

pub fn random_real(rng: &mut impl Rng, m: usize, n: usize) -> Matrix {
    Matrix::from_fn(m, n, |_, _| c(rng.gen_range(-1.0..1.0), 0.0))
}

/// Product of random `m × r` and `r × n` factors.
pub fn random_rank(rng: &mut impl Rng, m: usize, n: usize, r: usize, complex: bool) -> Matrix {
    if complex {
        random_complex(rng, m, r) * random_complex(rng, r, n)
    } else {
        random_real(rng, m, r) * random_real(rng, r, n)
    }
}

/// Entries with pairwise distinct moduli: a random permutation of
/// `1..=mn` scaled to `(0, 1]`, jittered and rotated by a random phase.
pub fn distinct_modulus(rng: &mut impl Rng, m: usize, n: usize) -> Matrix {
    let mut levels: Vec<usize> = (1..=m * n).collect();
    levels.shuffle(rng);
    let scale = (m * n) as f64;
    Matrix::from_fn(m, n, |i, j| {
        let level = levels[i * n + j] as f64 + rng.gen_range(0.0..0.5);
        let phase = rng.gen_range(0.0..std::f64::consts::TAU);
        Complex64::from_polar(level / scale, phase)
    })
}

pub fn random_pattern(rng: &mut impl Rng, m: usize, n: usize, density: f64) -> Pattern {
    Pattern::from_fn(m, n, |_, _| rng.gen_bool(density))
}

pub fn unit(rng: &mut impl Rng) -> Complex64 {
    Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU))
}

/// Permutation matrix with random unit-modulus nonzeros.
pub fn complex_permutation(rng: &mut impl Rng, n: usize) -> Matrix {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut p = Matrix::zeros(n, n);
    for (i, &j) in perm.iter().enumerate() {
        p[(i, j)] = unit(rng);
    }
    p
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    Identity,
    Transpose,
    Adjoint,
}

pub fn apply_op(a: &Matrix, op: Op) -> Matrix {
    match op {
        Op::Identity => a.clone(),
        Op::Transpose => a.transpose(),
        Op::Adjoint => a.adjoint(),
    }
}

pub fn rel_diff(x: &Matrix, y: &Matrix) -> f64 {
    let scale = x.norm().max(y.norm());
    if scale == 0.0 {
        0.0
    } else {
        (x - y).norm() / scale
    }
}

/// Column-major `vec`.
fn vec_of(a: &Matrix) -> DVector<Complex64> {
    DVector::from_iterator(a.len(), a.iter().copied())
}

fn kron(a: &Matrix, b: &Matrix) -> Matrix {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    Matrix::from_fn(ar * br, ac * bc, |i, j| a[(i / br, j / bc)] * b[(i % br, j % bc)])
}

/// Minimum-norm least-squares solution through the SVD.
fn lstsq(m: &Matrix, b: &DVector<Complex64>) -> DVector<Complex64> {
    let svd = m.clone().svd(true, true);
    let top = svd.singular_values.iter().copied().fold(0.0, f64::max);
    svd.solve(b, 1e-13 * top).expect("SVD computed with both factors")
}

/// Reference minimizer built from the explicit augmented system
///
/// ```text
/// [ MᴴM  Eᴴ ] [ x ]   [ MᴴM·vec(A) ]
/// [ E    0  ] [ λ ] = [ 0          ]
/// ```
///
/// where `M = [A†ᵀ ⊗ I_m ; I_n ⊗ A†]` maps `vec(X)` to the stacked
/// `vec(X·A†)`, `vec(A†·X)` and `E` stacks the selector rows of positions
/// outside the pattern and the Kronecker forms of `X·V2 = 0`, `U2ᴴ·X = 0`.
pub fn kkt_oracle(a: &Matrix, z: &Pattern, rank_tol: f64) -> Matrix {
    let (m, n) = a.shape();
    let f = factorize(a, rank_tol).unwrap();
    let pinv = pseudoinverse(&f);
    let mm = {
        let top = kron(&pinv.transpose(), &Matrix::identity(m, m));
        let bottom = kron(&Matrix::identity(n, n), &pinv);
        let mut stacked = Matrix::zeros(top.nrows() + bottom.nrows(), m * n);
        stacked.rows_mut(0, top.nrows()).copy_from(&top);
        stacked.rows_mut(top.nrows(), bottom.nrows()).copy_from(&bottom);
        stacked
    };
    let gram = mm.adjoint() * &mm;

    let mut rows: Vec<DVector<Complex64>> = Vec::new();
    for j in 0..n {
        for i in 0..m {
            if !z.get(i, j) {
                let mut e = DVector::zeros(m * n);
                e[j * m + i] = c(1.0, 0.0);
                rows.push(e);
            }
        }
    }
    let right = kron(&f.v2.transpose(), &Matrix::identity(m, m));
    let left = kron(&Matrix::identity(n, n), &f.u2.adjoint());
    for block in [&right, &left] {
        for r in 0..block.nrows() {
            rows.push(block.row(r).transpose());
        }
    }
    let k = rows.len();
    let dim = m * n + k;
    let mut kkt = Matrix::zeros(dim, dim);
    kkt.view_mut((0, 0), (m * n, m * n)).copy_from(&gram);
    for (r, e) in rows.iter().enumerate() {
        for col in 0..m * n {
            kkt[(m * n + r, col)] = e[col];
            kkt[(col, m * n + r)] = e[col].conj();
        }
    }
    let mut rhs = DVector::zeros(dim);
    rhs.rows_mut(0, m * n).copy_from(&(&gram * vec_of(a)));
    let sol = lstsq(&kkt, &rhs);
    Matrix::from_fn(m, n, |i, j| if z.get(i, j) { sol[j * m + i] } else { c(0.0, 0.0) })
}

/// Reference misfit evaluated through the SVD sums
/// `½Σ‖(X − A)v_k‖²/σ_k² + ½Σ‖u_kᴴ(X − A)‖²/σ_k²`.
pub fn misfit_oracle(x: &Matrix, a: &Matrix) -> f64 {
    let f = factorize(a, 1e-13).unwrap();
    let d = x - a;
    let mut j = 0.0;
    for k in 0..f.rank {
        let s2 = f.sigma[k] * f.sigma[k];
        j += 0.5 * (&d * f.v1.column(k)).norm_squared() / s2;
        j += 0.5 * (f.u1.column(k).adjoint() * &d).norm_squared() / s2;
    }
    j
}

/// Central differences of `J` in the real and imaginary part of every entry,
/// packed as `∂J/∂Re + i·∂J/∂Im`.
pub fn fd_gradient(x: &Matrix, a: &Matrix, h: f64) -> Matrix {
    let pinv = pseudoinverse(&factorize(a, 1e-13).unwrap());
    let j = |y: &Matrix| specsparse::sparsifier::misfit(y, a, &pinv).unwrap();
    Matrix::from_fn(x.nrows(), x.ncols(), |i, k| {
        let mut parts = [0.0; 2];
        for (part, dir) in parts.iter_mut().zip([c(1.0, 0.0), c(0.0, 1.0)]) {
            let mut plus = x.clone();
            let mut minus = x.clone();
            plus[(i, k)] += dir * h;
            minus[(i, k)] -= dir * h;
            *part = (j(&plus) - j(&minus)) / (2.0 * h);
        }
        c(parts[0], parts[1])
    })
}

/// Exhaustive solution of the vector pattern problem: among all keep-masks
/// whose eliminated part has measure at most `(1 − q)` of the whole and that
/// keep at least `n_min` nonzeros, the ones eliminating the most nonzeros,
/// and among those the one with the smallest eliminated measure and then the
/// smallest eliminated modulus sum (which separates subsets when `p` is 0 or
/// infinite).
pub fn enumerate_vector_pattern(x: &[Complex64], p: f64, q: f64, n_min: usize) -> Vec<bool> {
    let n = x.len();
    assert!(n <= 16);
    let total = lp_measure(x, p);
    let nonzero: Vec<usize> = (0..n).filter(|&k| x[k].norm() != 0.0).collect();
    let mut best: Option<(usize, f64, f64, Vec<bool>)> = None;
    for bits in 0u32..(1 << nonzero.len()) {
        let eliminated: Vec<Complex64> =
            nonzero.iter().enumerate().filter(|(b, _)| bits & (1 << b) != 0).map(|(_, &k)| x[k]).collect();
        let count = eliminated.len();
        if nonzero.len() - count < n_min {
            continue;
        }
        let measure = lp_measure(&eliminated, p);
        if measure > (1.0 - q) * total {
            continue;
        }
        let mass: f64 = eliminated.iter().map(|v| v.norm()).sum();
        let better = match &best {
            None => true,
            Some((bc, bm, bs, _)) => {
                count > *bc || (count == *bc && (measure < *bm || (measure == *bm && mass < *bs)))
            }
        };
        if better {
            let mut mask = vec![false; n];
            for (b, &k) in nonzero.iter().enumerate() {
                mask[k] = bits & (1 << b) == 0;
            }
            best = Some((count, measure, mass, mask));
        }
    }
    best.expect("keeping every nonzero is always admissible").3
}

/// Pattern as a real 0/1 matrix, for products with `|P|` and `|Q|`.
pub fn indicator(z: &Pattern) -> DMatrix<f64> {
    DMatrix::from_fn(z.rows(), z.cols(), |i, j| if z.get(i, j) { 1.0 } else { 0.0 })
}

/// 0/1 matrix of the nonzero positions of `a`.
pub fn support(a: &Matrix) -> DMatrix<f64> {
    a.map(|v| if v.norm() != 0.0 { 1.0 } else { 0.0 })
}
