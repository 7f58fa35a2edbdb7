//! Sparsification of dense real and complex matrices that keeps the left and
//! right null-spaces exact and perturbs the near null-space as little as
//! possible.
//!
//! The pipeline has three stages:
//!
//! 1. [`spectral::factorize`] computes a rank-revealing SVD and the
//!    pseudoinverse of the input `A`.
//! 2. [`pattern::matrix_pattern`] picks the entries allowed to stay nonzero by
//!    thresholding every row and column with an Lp measure.
//! 3. [`sparsifier::solve_with_pattern`] minimizes the pseudoinverse-weighted
//!    misfit
//!
//!    ```text
//!    J(X; A) = ½‖(X − A)A†‖²_F + ½‖A†(X − A)‖²_F
//!    ```
//!
//!    over matrices with that pattern subject to `X·V2 = 0` and `Xᴴ·U2 = 0`.
//!
//! [`sparsifier::sparsify`] runs all three; [`diagnostics::build_report`]
//! measures the result. Structured inputs (Hermitian, circulant, Hamiltonian,
//! persymmetric, ...) produce outputs in the same class without any explicit
//! structural constraint.

pub mod diagnostics;
pub mod error;
pub mod io;
mod linalg;
pub mod pattern;
pub mod sparsifier;
pub mod spectral;
pub mod structgen;
pub mod sweep;

pub use error::{Error, Result};
pub use linalg::{frobenius, is_real, Matrix};
pub use num_complex::Complex64;
pub use pattern::{LpParams, Pattern};
pub use sparsifier::{SparsifyOutcome, SparsifyParams};
pub use spectral::SpectralData;
