//! Lp-measure sparsity patterns for vectors and matrices.
//!
//! For a vector the pattern eliminates as many entries as possible while the
//! Lp measure of the eliminated entries stays within `(1 − q)` of the measure
//! of the whole vector and at least `n_min` entries survive. Eliminating the
//! smallest moduli first is optimal, so the vector pattern is a greedy pass
//! over the moduli sorted by `(modulus, index)`. When the cut would fall
//! inside a run of equal moduli the whole run is kept, so tied entries are
//! always treated alike.
//!
//! A matrix pattern is the union of the patterns of its rows and of its
//! columns. Since every row and column is judged only against itself, the
//! result is invariant under scaling, transposition, conjugation, sign changes
//! and complex permutations of rows and columns.

use std::cmp::Ordering;
use std::fmt;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::spectral::SpectralData;

/// `m × n` boolean mask: `true` marks an entry that may be nonzero.
#[derive(Clone, PartialEq, Eq)]
pub struct Pattern {
    rows: usize,
    cols: usize,
    /// Row-major.
    mask: Vec<bool>,
    nnz: usize,
}

impl Pattern {
    pub fn new(rows: usize, cols: usize, mask: Vec<bool>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidInput("pattern must have at least one row and column".into()));
        }
        if mask.len() != rows * cols {
            return Err(Error::Shape(format!(
                "pattern of {rows}x{cols} needs {} entries, got {}",
                rows * cols,
                mask.len()
            )));
        }
        let nnz = mask.iter().filter(|&&b| b).count();
        Ok(Pattern { rows, cols, mask, nnz })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mask: Vec<bool> = (0..rows * cols).map(|k| f(k / cols, k % cols)).collect();
        let nnz = mask.iter().filter(|&&b| b).count();
        Pattern { rows, cols, mask, nnz }
    }

    pub fn ones(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| true)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| false)
    }

    /// Pattern of the structurally nonzero entries of `a`.
    pub fn nonzero_indicator(a: &Matrix) -> Self {
        Self::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)] != Complex64::new(0.0, 0.0))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn nnz(&self) -> usize {
        self.nnz
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.mask[i * self.cols + j]
    }

    /// Row-major mask.
    pub fn as_slice(&self) -> &[bool] {
        &self.mask
    }

    /// Free positions in row-major order.
    pub fn free_positions(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let cols = self.cols;
        self.mask.iter().enumerate().filter(|(_, &b)| b).map(move |(k, _)| (k / cols, k % cols))
    }

    pub fn transpose(&self) -> Pattern {
        Pattern::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn or(&self, other: &Pattern) -> Result<Pattern> {
        self.check_same_shape(other)?;
        let mask = self.mask.iter().zip(&other.mask).map(|(a, b)| *a || *b).collect();
        Pattern::new(self.rows, self.cols, mask)
    }

    /// Entrywise `self ≤ other`.
    pub fn is_subset_of(&self, other: &Pattern) -> bool {
        self.shape() == other.shape() && self.mask.iter().zip(&other.mask).all(|(a, b)| !*a || *b)
    }

    /// `Z ∘ A`: zeroes the entries of `a` outside the pattern.
    pub fn apply(&self, a: &Matrix) -> Result<Matrix> {
        if a.shape() != self.shape() {
            return Err(Error::Shape(format!(
                "pattern is {}x{} but matrix is {}x{}",
                self.rows,
                self.cols,
                a.nrows(),
                a.ncols()
            )));
        }
        Ok(Matrix::from_fn(self.rows, self.cols, |i, j| {
            if self.get(i, j) {
                a[(i, j)]
            } else {
                Complex64::new(0.0, 0.0)
            }
        }))
    }

    /// The pattern as a 0/1 matrix.
    pub fn to_matrix(&self) -> Matrix {
        Matrix::from_fn(self.rows, self.cols, |i, j| Complex64::new(if self.get(i, j) { 1.0 } else { 0.0 }, 0.0))
    }

    fn check_same_shape(&self, other: &Pattern) -> Result<()> {
        if self.shape() != other.shape() {
            return Err(Error::Shape(format!(
                "patterns are {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }
}

impl fmt::Debug for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Pattern {}x{} nnz={}", self.rows, self.cols, self.nnz)?;
        for i in 0..self.rows {
            let row: String = (0..self.cols).map(|j| if self.get(i, j) { '1' } else { '.' }).collect();
            writeln!(f, "  {row}")?;
        }
        Ok(())
    }
}

pub fn pattern_transpose(z: &Pattern) -> Pattern {
    z.transpose()
}

pub fn pattern_or(z1: &Pattern, z2: &Pattern) -> Result<Pattern> {
    z1.or(z2)
}

/// Parameters of the matrix pattern computation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LpParams {
    /// Measure exponent in `[0, ∞]`.
    pub p: f64,
    /// Fraction kept, in `[0, 1]`. `q = 1` eliminates nothing.
    pub q: f64,
    /// Minimum free entries per row.
    pub n_row: usize,
    /// Minimum free entries per column.
    pub n_col: usize,
}

impl LpParams {
    pub fn new(p: f64, q: f64, n_row: usize, n_col: usize) -> Self {
        LpParams { p, q, n_row, n_col }
    }

    pub fn validate(&self) -> Result<()> {
        validate_pq(self.p, self.q)
    }
}

pub(crate) fn validate_pq(p: f64, q: f64) -> Result<()> {
    if p.is_nan() || p < 0.0 {
        return Err(Error::InvalidParameter(format!("p must lie in [0, inf], got {p}")));
    }
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::InvalidParameter(format!("q must lie in [0, 1], got {q}")));
    }
    Ok(())
}

/// The Lp "norm" of `x`: a true norm for `p ≥ 1`, the un-rooted sum
/// `Σ|xᵢ|^p` for `0 < p < 1`, and the nonzero count for `p = 0`.
pub fn lp_measure(x: &[Complex64], p: f64) -> f64 {
    let moduli: Vec<f64> = x.iter().map(|z| z.norm()).collect();
    measure_of_moduli(&moduli, p)
}

fn measure_of_moduli(moduli: &[f64], p: f64) -> f64 {
    if p == 0.0 {
        moduli.iter().filter(|&&a| a != 0.0).count() as f64
    } else if p.is_infinite() {
        moduli.iter().copied().fold(0.0, f64::max)
    } else {
        let sum: f64 = moduli.iter().map(|a| a.powf(p)).sum();
        if p < 1.0 {
            sum
        } else {
            sum.powf(1.0 / p)
        }
    }
}

/// Running measure of the smallest entries, in ascending order, so every
/// prefix and the total are accumulated identically.
struct PrefixMeasure {
    p: f64,
    acc: f64,
    count: usize,
}

impl PrefixMeasure {
    fn new(p: f64) -> Self {
        PrefixMeasure { p, acc: 0.0, count: 0 }
    }

    fn push(&mut self, modulus: f64) {
        self.count += 1;
        if self.p == 0.0 {
        } else if self.p.is_infinite() {
            self.acc = self.acc.max(modulus);
        } else {
            self.acc += modulus.powf(self.p);
        }
    }

    fn value(&self) -> f64 {
        if self.p == 0.0 {
            self.count as f64
        } else if self.p.is_infinite() || self.p < 1.0 {
            self.acc
        } else {
            self.acc.powf(1.0 / self.p)
        }
    }
}

/// Pattern of a vector given by the moduli of its entries.
fn pattern_of_moduli(moduli: &[f64], p: f64, q: f64, n_min: usize) -> Result<Vec<bool>> {
    let mut order: Vec<usize> = (0..moduli.len()).filter(|&k| moduli[k] != 0.0).collect();
    let nnz = order.len();
    let mut mask = vec![false; moduli.len()];
    if nnz == 0 {
        return Ok(mask);
    }
    if n_min > nnz {
        return Err(Error::InvalidParameter(format!(
            "minimum of {n_min} nonzeros exceeds the {nnz} nonzeros available"
        )));
    }
    order.sort_by(|&a, &b| moduli[a].partial_cmp(&moduli[b]).unwrap_or(Ordering::Equal).then(a.cmp(&b)));

    let mut total = PrefixMeasure::new(p);
    for &k in &order {
        total.push(moduli[k]);
    }
    let threshold = (1.0 - q) * total.value();

    let mut eliminated = PrefixMeasure::new(p);
    let mut k = 0;
    while k < nnz - n_min {
        eliminated.push(moduli[order[k]]);
        if eliminated.value() > threshold {
            break;
        }
        k += 1;
    }
    // Never split a group of equal moduli: a cut inside it would depend on
    // the entries' positions and break permutation invariance.
    while k > 0 && k < nnz && moduli[order[k - 1]] == moduli[order[k]] {
        k -= 1;
    }
    for &idx in &order[k..] {
        mask[idx] = true;
    }
    Ok(mask)
}

/// Sparsity pattern of a vector: `true` marks entries that are kept. Zeros
/// are never kept, and entries of equal modulus are kept or eliminated
/// together.
pub fn vector_pattern(x: &[Complex64], p: f64, q: f64, n_min: usize) -> Result<Vec<bool>> {
    validate_pq(p, q)?;
    let moduli: Vec<f64> = x.iter().map(|z| z.norm()).collect();
    pattern_of_moduli(&moduli, p, q, n_min)
}

fn row_patterns(moduli: &[Vec<f64>], p: f64, q: f64, n_min: usize) -> Result<Vec<Vec<bool>>> {
    moduli
        .par_iter()
        .map(|line| {
            let nnz = line.iter().filter(|&&a| a != 0.0).count();
            pattern_of_moduli(line, p, q, n_min.min(nnz))
        })
        .collect()
}

fn moduli_rows(a: &Matrix) -> Vec<Vec<f64>> {
    (0..a.nrows()).map(|i| (0..a.ncols()).map(|j| a[(i, j)].norm()).collect()).collect()
}

fn moduli_cols(a: &Matrix) -> Vec<Vec<f64>> {
    (0..a.ncols()).map(|j| (0..a.nrows()).map(|i| a[(i, j)].norm()).collect()).collect()
}

/// Union of the row-wise and column-wise vector patterns of `a`.
///
/// The per-row minimum is clamped to the number of nonzeros in that row (and
/// likewise for columns), so zero rows never fail.
pub fn matrix_pattern(a: &Matrix, params: &LpParams) -> Result<Pattern> {
    params.validate()?;
    let rows = row_patterns(&moduli_rows(a), params.p, params.q, params.n_row)?;
    let cols = row_patterns(&moduli_cols(a), params.p, params.q, params.n_col)?;
    Ok(Pattern::from_fn(a.nrows(), a.ncols(), |i, j| rows[i][j] || cols[j][i]))
}

/// Faster pattern for square matrices whose entrywise modulus is symmetric
/// (Hermitian, skew-Hermitian, complex-symmetric, ...): only rows are scanned
/// and the result is united with its transpose. Gives the same mask as
/// [`matrix_pattern`] when `n_row == n_col`.
pub fn matrix_pattern_symmetric(a: &Matrix, params: &LpParams) -> Result<Pattern> {
    params.validate()?;
    let n = a.nrows();
    if n != a.ncols() {
        return Err(Error::Shape(format!("symmetric pattern needs a square matrix, got {}x{}", n, a.ncols())));
    }
    if params.n_row != params.n_col {
        return Err(Error::InvalidParameter("symmetric pattern needs n_row == n_col".into()));
    }
    let moduli = moduli_rows(a);
    for i in 0..n {
        for j in 0..i {
            if moduli[i][j] != moduli[j][i] {
                return Err(Error::InvalidInput(format!("|A| is not symmetric at ({i}, {j})")));
            }
        }
    }
    let rows = row_patterns(&moduli, params.p, params.q, params.n_row)?;
    Ok(Pattern::from_fn(n, n, |i, j| rows[i][j] || rows[j][i]))
}

/// `(N_row, N_col) = (min(n, p_R + 1), min(m, p_L + 1))`, the fewest free
/// entries per row and column that leave room for a nonzero row or column
/// after the null-space constraints.
pub fn default_min_nonzeros(f: &SpectralData) -> (usize, usize) {
    (f.cols().min(f.right_nullity() + 1), f.rows().min(f.left_nullity() + 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::factorize;
    use proptest::prelude::*;

    fn r(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn reals(xs: &[f64]) -> Vec<Complex64> {
        xs.iter().map(|&x| r(x)).collect()
    }

    /// Exhaustive search over all masks: maximize the eliminated count subject
    /// to the kept-count and measure constraints. Kept entries are counted
    /// among the nonzeros, since a mask never marks a zero of `x`.
    fn brute_force_max_eliminated(x: &[Complex64], p: f64, q: f64, n_min: usize) -> usize {
        let n = x.len();
        let total = lp_measure(x, p);
        let nnz = x.iter().filter(|z| z.norm() != 0.0).count();
        let mut best = 0;
        for bits in 0u32..(1 << n) {
            let kept: Vec<bool> = (0..n).map(|k| bits & (1 << k) != 0).collect();
            let eliminated: Vec<Complex64> =
                (0..n).filter(|&k| !kept[k]).map(|k| x[k]).collect();
            let kept_nnz = (0..n).filter(|&k| kept[k] && x[k].norm() != 0.0).count();
            let elim_nnz = nnz - kept_nnz;
            if kept_nnz >= n_min && lp_measure(&eliminated, p) <= (1.0 - q) * total {
                best = best.max(elim_nnz);
            }
        }
        best
    }

    #[test]
    fn lp_measure_examples() {
        assert_eq!(lp_measure(&reals(&[3.0, 4.0]), 2.0), 5.0);
        assert_eq!(lp_measure(&reals(&[1.0, -2.0, 0.0]), 0.0), 2.0);
        assert!((lp_measure(&reals(&[1.0, 2.0]), 0.5) - (1.0 + 2f64.sqrt())).abs() < 1e-15);
        assert_eq!(lp_measure(&reals(&[1.0, -7.0, 2.0]), f64::INFINITY), 7.0);
    }

    #[test]
    fn vector_pattern_examples() {
        let x = reals(&[3.0, 1.0, 0.0, 2.0]);
        assert_eq!(brute_force_max_eliminated(&x, 1.0, 0.5, 1), 2);
        assert_eq!(vector_pattern(&x, 1.0, 0.5, 1).unwrap(), vec![true, false, false, false]);

        for p in [0.0, 0.5, 1.0, f64::INFINITY] {
            assert_eq!(vector_pattern(&[r(0.0); 5], p, 0.3, 2).unwrap(), vec![false; 5]);
        }

        let x = vec![r(5.0), Complex64::new(0.0, 4.0), r(1.0)];
        assert_eq!(brute_force_max_eliminated(&x, f64::INFINITY, 0.5, 0), 1);
        assert_eq!(vector_pattern(&x, f64::INFINITY, 0.5, 0).unwrap(), vec![true, true, false]);
    }

    #[test]
    fn vector_pattern_extremes() {
        let x = reals(&[0.5, -3.0, 0.0, 1.0, 2.0]);
        assert_eq!(vector_pattern(&x, 1.0, 1.0, 0).unwrap(), vec![true, true, false, true, true]);
        assert_eq!(vector_pattern(&x, 1.0, 0.0, 0).unwrap(), vec![false; 5]);
        assert_eq!(vector_pattern(&x, 1.0, 0.0, 2).unwrap(), vec![false, true, false, false, true]);
    }

    #[test]
    fn p_zero_threshold_uses_counts() {
        // (1 - 0.5)·4 = 2 entries may go.
        let x = reals(&[4.0, 3.0, 2.0, 1.0]);
        assert_eq!(vector_pattern(&x, 0.0, 0.5, 0).unwrap(), vec![true, true, false, false]);
        // (1 - 0.6)·4 = 1.6 admits a single elimination.
        assert_eq!(vector_pattern(&x, 0.0, 0.6, 0).unwrap(), vec![true, true, true, false]);
    }

    #[test]
    fn ties_are_kept_together() {
        // Threshold 0.2·13 = 2.6 would admit two of the three ones.
        let x = reals(&[1.0, 1.0, 1.0, 10.0]);
        assert_eq!(vector_pattern(&x, 1.0, 0.8, 0).unwrap(), vec![true; 4]);
        let x = reals(&[1.0, 10.0, 1.0, 2.0]);
        assert_eq!(vector_pattern(&x, 1.0, 0.8, 0).unwrap(), vec![false, true, false, true]);
        let x = vec![r(3.0), Complex64::new(0.0, -3.0), r(1.0), r(-3.0)];
        assert_eq!(vector_pattern(&x, 1.0, 0.5, 0).unwrap(), vec![true, true, false, true]);
    }

    #[test]
    fn vector_pattern_rejects_bad_parameters() {
        let x = reals(&[1.0, 0.0, 2.0]);
        assert!(matches!(vector_pattern(&x, 1.0, 0.5, 3), Err(Error::InvalidParameter(_))));
        assert!(matches!(vector_pattern(&x, 1.0, 1.5, 0), Err(Error::InvalidParameter(_))));
        assert!(matches!(vector_pattern(&x, -1.0, 0.5, 0), Err(Error::InvalidParameter(_))));
        assert!(matches!(vector_pattern(&x, f64::NAN, 0.5, 0), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn matrix_pattern_examples() {
        let id = Matrix::identity(3, 3);
        for (p, q) in [(1.0, 0.0), (2.0, 0.5), (f64::INFINITY, 0.9), (0.0, 0.1)] {
            let z = matrix_pattern(&id, &LpParams::new(p, q, 1, 1)).unwrap();
            assert_eq!(z, Pattern::from_fn(3, 3, |i, j| i == j));
        }

        let a = Matrix::from_row_slice(2, 2, &reals(&[10.0, 1.0, 1.0, 10.0]));
        let z = matrix_pattern(&a, &LpParams::new(1.0, 0.8, 1, 1)).unwrap();
        assert_eq!(z, Pattern::from_fn(2, 2, |i, j| i == j));
    }

    #[test]
    fn zero_rows_do_not_fail() {
        let a = Matrix::from_row_slice(2, 3, &reals(&[0.0, 0.0, 0.0, 1.0, 5.0, 0.1]));
        let z = matrix_pattern(&a, &LpParams::new(1.0, 0.5, 2, 1)).unwrap();
        assert!(!z.get(0, 0) && !z.get(0, 1) && !z.get(0, 2));
        assert!(z.get(1, 1));
    }

    #[test]
    fn pattern_algebra() {
        let z = Pattern::from_fn(2, 2, |i, j| i == 0 && j == 0);
        assert_eq!(pattern_transpose(&z), z);
        let wide = Pattern::from_fn(2, 3, |i, j| i == 0 && j == 2);
        let t = wide.transpose();
        assert_eq!(t.shape(), (3, 2));
        assert!(t.get(2, 0));
        assert_eq!(t.nnz(), 1);

        let id = Pattern::from_fn(2, 2, |i, j| i == j);
        let anti = Pattern::from_fn(2, 2, |i, j| i + j == 1);
        assert_eq!(pattern_or(&id, &anti).unwrap(), Pattern::ones(2, 2));
        assert_eq!(pattern_or(&id, &id).unwrap(), id);
        assert!(matches!(pattern_or(&id, &wide), Err(Error::Shape(_))));
    }

    #[test]
    fn default_min_nonzeros_examples() {
        let f = factorize(&Matrix::identity(5, 5), 1e-12).unwrap();
        assert_eq!(default_min_nonzeros(&f), (1, 1));

        let mut d = Matrix::identity(6, 6);
        d[(4, 4)] = r(0.0);
        d[(5, 5)] = r(0.0);
        let f = factorize(&d, 1e-12).unwrap();
        assert_eq!(default_min_nonzeros(&f), (3, 3));

        let wide = Matrix::from_fn(3, 5, |i, j| r(if i == j { 1.0 + i as f64 } else { 0.0 }));
        let f = factorize(&wide, 1e-12).unwrap();
        assert_eq!(default_min_nonzeros(&f), (3, 1));
    }

    #[test]
    fn symmetric_fast_path_matches_general() {
        let a = Matrix::from_fn(7, 7, |i, j| {
            let (lo, hi) = (i.min(j) as f64, i.max(j) as f64);
            let v = ((lo * 1.7 + hi * 0.31).sin() + 0.01 * (lo + 2.0 * hi)) * 3.0;
            if i <= j { Complex64::new(v, 0.3 * v) } else { Complex64::new(v, -0.3 * v) }
        });
        for (p, q) in [(1.0, 0.7), (2.0, 0.5), (0.5, 0.9), (f64::INFINITY, 0.6)] {
            let params = LpParams::new(p, q, 2, 2);
            assert_eq!(matrix_pattern_symmetric(&a, &params).unwrap(), matrix_pattern(&a, &params).unwrap());
        }
        let mut b = a.clone();
        b[(0, 1)] *= 2.0;
        assert!(matrix_pattern_symmetric(&b, &LpParams::new(1.0, 0.5, 1, 1)).is_err());
    }

    fn distinct_moduli(len: usize) -> impl Strategy<Value = Vec<Complex64>> {
        // Distinct moduli up to a random permutation, with random phases and a few zeros.
        (
            Just((1..=len).collect::<Vec<usize>>()).prop_shuffle(),
            prop::collection::vec(0.0..std::f64::consts::TAU, len),
            prop::collection::vec(prop::bool::weighted(0.15), len),
            0.1f64..0.9,
        )
            .prop_map(|(ranks, phases, zero, jitter)| {
                ranks
                    .iter()
                    .zip(&phases)
                    .zip(&zero)
                    .map(|((&rank, &phase), &z)| {
                        if z {
                            Complex64::new(0.0, 0.0)
                        } else {
                            Complex64::from_polar(rank as f64 + jitter * (rank as f64).sqrt().fract(), phase)
                        }
                    })
                    .collect()
            })
    }

    fn any_p() -> impl Strategy<Value = f64> {
        prop_oneof![Just(0.0), Just(0.5), Just(1.0), Just(1.5), Just(2.0), Just(3.0), Just(f64::INFINITY)]
    }

    proptest! {
        #[test]
        fn greedy_matches_enumeration(
            x in (1usize..=10).prop_flat_map(distinct_moduli),
            p in any_p(),
            q in 0.0f64..=1.0,
            n_frac in 0.0f64..=1.0,
        ) {
            let nnz = x.iter().filter(|z| z.norm() != 0.0).count();
            let n_min = (n_frac * nnz as f64).floor() as usize;
            let mask = vector_pattern(&x, p, q, n_min).unwrap();
            let eliminated: Vec<Complex64> = (0..x.len()).filter(|&k| !mask[k]).map(|k| x[k]).collect();
            let elim_nnz = eliminated.iter().filter(|z| z.norm() != 0.0).count();
            prop_assert!(lp_measure(&eliminated, p) <= (1.0 - q) * lp_measure(&x, p));
            prop_assert!(mask.iter().filter(|&&b| b).count() >= n_min);
            prop_assert_eq!(elim_nnz, brute_force_max_eliminated(&x, p, q, n_min));
            for k in 0..x.len() {
                prop_assert!(x[k].norm() != 0.0 || !mask[k]);
            }
        }

        #[test]
        fn monotone_in_q(x in distinct_moduli(9), p in any_p(), q1 in 0.0f64..=1.0, q2 in 0.0f64..=1.0) {
            let (lo, hi) = if q1 <= q2 { (q1, q2) } else { (q2, q1) };
            let a = vector_pattern(&x, p, lo, 1).unwrap();
            let b = vector_pattern(&x, p, hi, 1).unwrap();
            for k in 0..x.len() {
                prop_assert!(!a[k] || b[k]);
            }
        }
    }
}
