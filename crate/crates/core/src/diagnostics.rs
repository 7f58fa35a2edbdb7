//! Quality measures for a sparsification and the a priori / a posteriori
//! bounds they are expected to satisfy.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::pattern::Pattern;
use crate::sparsifier::{SparsifyOutcome, SparsifyParams};
use crate::spectral::{self, SpectralData};
use crate::structgen::{cyclic_matrix, exchange_matrix, symplectic_matrix};

/// Eigenvalues below this fraction of the largest modulus count as zero.
pub const EIGEN_ZERO_TOL: f64 = 1e-10;

/// Relative slack on the a priori bounds.
pub const APRIORI_SLACK: f64 = 1e-12;

/// Relative slack on the clustering and condition bounds.
pub const APOSTERIORI_SLACK: f64 = 1e-10;

/// `C = 1 − 1/p + |½ − 1/p|` for `p ∈ [1, ∞]`.
pub fn exponent_c(p: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::InvalidParameter(format!("bounds need p in [1, inf], got {p}")));
    }
    let inv = if p.is_infinite() { 0.0 } else { 1.0 / p };
    Ok(1.0 - inv + (0.5 - inv).abs())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub ok: bool,
}

impl BoundCheck {
    fn new(lhs: f64, rhs: f64, slack: f64) -> Self {
        BoundCheck { lhs, rhs, ok: lhs <= rhs * (1.0 + slack) }
    }

    pub fn margin(&self) -> f64 {
        self.rhs - self.lhs
    }
}

/// `‖A − Z∘A‖₂ ≤ (mn)^(C/2)·(1 − q)·‖A‖₂` for a pattern computed from `a`
/// with parameters `(p, q)`.
pub fn apriori_perturbation_check(a: &Matrix, p: f64, q: f64, z: &Pattern) -> Result<BoundCheck> {
    let c = exponent_c(p)?;
    let dropped = a - z.apply(a)?;
    let lhs = linalg::spectral_norm(&dropped)?;
    let mn = (a.nrows() * a.ncols()) as f64;
    let rhs = mn.powf(c / 2.0) * (1.0 - q) * linalg::spectral_norm(a)?;
    Ok(BoundCheck::new(lhs, rhs, APRIORI_SLACK))
}

/// `J_min ≤ m^(1+2C)·(1 − q)²·κ(A)²`. `None` unless `a` is square and
/// nonsingular.
pub fn misfit_bound_check(a: &Matrix, p: f64, q: f64, j_min: f64) -> Result<Option<BoundCheck>> {
    let c = exponent_c(p)?;
    let m = a.nrows();
    if m != a.ncols() {
        return Ok(None);
    }
    let f = spectral::factorize(a, spectral::default_rank_tol(m, m))?;
    let Some(kappa) = f.kappa.filter(|_| f.rank == m) else {
        return Ok(None);
    };
    let bound = (m as f64).powf(1.0 + 2.0 * c) * (1.0 - q).powi(2) * kappa * kappa;
    Ok(Some(BoundCheck::new(j_min, bound, APRIORI_SLACK)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClusterCheck {
    pub radius: f64,
    pub max_distance: f64,
    pub ok: bool,
}

fn max_distance_from_one(m: &Matrix) -> Result<f64> {
    Ok(spectral::nonzero_eigenvalues(m, EIGEN_ZERO_TOL)?
        .iter()
        .map(|z| (z - Complex64::new(1.0, 0.0)).norm())
        .fold(0.0, f64::max))
}

/// Every nonzero eigenvalue of `A†X` and `XA†` lies within `√(2·J_min)` of 1.
pub fn clustering_check(x: &Matrix, a_pinv: &Matrix, j_min: f64) -> Result<ClusterCheck> {
    let radius = (2.0 * j_min).sqrt();
    let max_distance = max_distance_from_one(&(a_pinv * x))?.max(max_distance_from_one(&(x * a_pinv))?);
    Ok(ClusterCheck { radius, max_distance, ok: max_distance <= radius * (1.0 + APOSTERIORI_SLACK) + 1e-10 })
}

/// `σ₁/σ_r` of a matrix known to have rank `r`.
fn condition_of_rank(m: &Matrix, rank: usize) -> Result<Option<f64>> {
    if rank == 0 {
        return Ok(None);
    }
    let sv = linalg::singular_values(m)?;
    match sv.get(rank - 1) {
        Some(&s) if s > 0.0 => Ok(Some(sv[0] / s)),
        _ => Ok(None),
    }
}

/// `(κ(A†X), κ(XA†))`, both computed over the top `rank(A)` singular values.
pub fn product_conditions(x: &Matrix, f: &SpectralData, a_pinv: &Matrix) -> Result<(Option<f64>, Option<f64>)> {
    Ok((condition_of_rank(&(a_pinv * x), f.rank)?, condition_of_rank(&(x * a_pinv), f.rank)?))
}

/// `max(κ(XA†), κ(A†X)) ≤ (1 + √(2J))/(1 − √(2J))`. `None` when `J_min ≥ ½`
/// or `X` has lost rank relative to `A`.
pub fn condition_bound_check(x: &Matrix, f: &SpectralData, a_pinv: &Matrix, j_min: f64) -> Result<Option<BoundCheck>> {
    if j_min >= 0.5 || f.rank == 0 {
        return Ok(None);
    }
    let x_rank = spectral::factorize(x, f.rank_tol)?.rank;
    if x_rank < f.rank {
        return Ok(None);
    }
    let (Some(left), Some(right)) = product_conditions(x, f, a_pinv)? else {
        return Ok(None);
    };
    let s = (2.0 * j_min).sqrt();
    Ok(Some(BoundCheck::new(left.max(right), (1.0 + s) / (1.0 - s), APOSTERIORI_SLACK)))
}

/// `‖X† − A†‖_F / ‖A†‖_F`.
pub fn rel_inverse_diff(x: &Matrix, a: &Matrix, rank_tol: f64) -> Result<f64> {
    let a_pinv = spectral::pseudoinverse(&spectral::factorize(a, rank_tol)?);
    let denom = a_pinv.norm();
    if denom == 0.0 {
        return Err(Error::UndefinedCondition("pseudoinverse of A is zero".into()));
    }
    let x_pinv = spectral::pseudoinverse(&spectral::factorize(x, rank_tol)?);
    Ok((x_pinv - a_pinv).norm() / denom)
}

/// Names of the structured classes, in report order.
pub const SUBSPACES: [&str; 14] = [
    "centrosymmetric",
    "skew_centrosymmetric",
    "circulant",
    "skew_circulant",
    "complex_symmetric",
    "skew_complex_symmetric",
    "hamiltonian",
    "skew_hamiltonian",
    "hermitian",
    "skew_hermitian",
    "persymmetric",
    "skew_persymmetric",
    "symmetric_real",
    "skew_symmetric_real",
];

/// Unnormalized defining residual of `name` for square `x`; `None` when the
/// class needs an even size and `x` is odd.
pub fn subspace_residual(x: &Matrix, name: &str) -> Result<Option<f64>> {
    let n = x.nrows();
    if n != x.ncols() {
        return Err(Error::Shape(format!("structured classes are square, got {}x{}", n, x.ncols())));
    }
    let exch = || exchange_matrix(n);
    let xt = x.transpose();
    let xh = x.adjoint();
    let imag = || x.map(|z| z.im).norm();
    let res = match name {
        "centrosymmetric" => (x * exch() - exch() * x).norm(),
        "skew_centrosymmetric" => (x * exch() + exch() * x).norm(),
        "circulant" => {
            let c = cyclic_matrix(n, 1)?;
            (x * &c - &c * x).norm()
        }
        "skew_circulant" => {
            let c = cyclic_matrix(n, -1)?;
            (x * &c - &c * x).norm()
        }
        "complex_symmetric" => (x - &xt).norm(),
        "skew_complex_symmetric" => (x + &xt).norm(),
        "hamiltonian" | "skew_hamiltonian" => {
            if n % 2 == 1 {
                return Ok(None);
            }
            let k = symplectic_matrix(n)?;
            if name == "hamiltonian" {
                (&k * x + &xh * &k).norm()
            } else {
                (&k * x - &xh * &k).norm()
            }
        }
        "hermitian" => (x - &xh).norm(),
        "skew_hermitian" => (x + &xh).norm(),
        "persymmetric" => (x * exch() - exch() * &xh).norm(),
        "skew_persymmetric" => (x * exch() + exch() * &xh).norm(),
        "symmetric_real" => (x - &xt).norm().hypot(imag()),
        "skew_symmetric_real" => (x + &xt).norm().hypot(imag()),
        other => return Err(Error::InvalidParameter(format!("unknown subspace {other:?}"))),
    };
    Ok(Some(res))
}

/// Defining residual of every structured class, relative to `‖x‖_F`. The real
/// classes also count the imaginary part of `x`. Rectangular input has no
/// applicable class and yields an empty map.
pub fn subspace_residuals(x: &Matrix) -> BTreeMap<String, Option<f64>> {
    let mut out = BTreeMap::new();
    if x.nrows() != x.ncols() {
        return out;
    }
    let scale = x.norm();
    for name in SUBSPACES {
        let res = subspace_residual(x, name).expect("square input and known name");
        out.insert(name.to_string(), res.map(|r| if scale > 0.0 { r / scale } else { 0.0 }));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub m: usize,
    pub n: usize,
    /// Serialized as the string `"inf"` when infinite.
    #[serde(with = "p_value")]
    pub p: f64,
    pub q: f64,
    pub rank: usize,
    pub kappa_a: Option<f64>,
    pub nnz_a: usize,
    pub nnz_x: usize,
    pub density_x: f64,
    pub j_min: f64,
    pub grad_residual: f64,
    pub nullspace_residual: f64,
    pub cond_x: Option<f64>,
    pub cond_pinva_x: Option<f64>,
    pub cond_x_pinva: Option<f64>,
    pub cluster_radius: f64,
    pub max_eig_distance: f64,
    pub cluster_ok: bool,
    pub cond_bound: Option<f64>,
    pub cond_bound_ok: Option<bool>,
    pub apriori_lhs: Option<f64>,
    pub apriori_rhs: Option<f64>,
    pub apriori_bound_ok: Option<bool>,
    pub apriori_margin: Option<f64>,
    pub misfit_bound: Option<f64>,
    pub misfit_bound_ok: Option<bool>,
    pub misfit_margin: Option<f64>,
    pub rel_inv_diff: Option<f64>,
    pub subspace_residuals: BTreeMap<String, Option<f64>>,
}

mod p_value {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Text(String),
    }

    pub fn serialize<S: Serializer>(p: &f64, s: S) -> Result<S::Ok, S::Error> {
        if p.is_infinite() {
            Repr::Text("inf".into()).serialize(s)
        } else {
            Repr::Num(*p).serialize(s)
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Num(p) => Ok(p),
            Repr::Text(t) if t == "inf" => Ok(f64::INFINITY),
            Repr::Text(t) => Err(serde::de::Error::custom(format!("invalid p {t:?}"))),
        }
    }
}

/// Evaluates every measure on an outcome produced from `a` with `params`.
pub fn build_report(a: &Matrix, outcome: &SparsifyOutcome, params: &SparsifyParams) -> Result<Report> {
    let (m, n) = a.shape();
    let f = &outcome.spectral;
    let x = &outcome.x;
    let nnz_x = x.iter().filter(|z| **z != Complex64::new(0.0, 0.0)).count();
    let nnz_a = a.iter().filter(|z| **z != Complex64::new(0.0, 0.0)).count();

    let x_is_zero = x.iter().all(|z| *z == Complex64::new(0.0, 0.0));
    let cond_x = if x_is_zero { None } else { Some(spectral::generalized_condition(x, f.rank_tol)?) };
    let (cond_pinva_x, cond_x_pinva) = product_conditions(x, f, &outcome.a_pinv)?;
    let cluster = clustering_check(x, &outcome.a_pinv, outcome.j_min)?;
    let cond_bound = condition_bound_check(x, f, &outcome.a_pinv, outcome.j_min)?;

    // The a priori bounds only cover computed patterns with p ≥ 1.
    let bounds_apply = params.pattern_override.is_none() && params.p >= 1.0;
    let apriori = if bounds_apply {
        Some(apriori_perturbation_check(a, params.p, params.q, &outcome.pattern)?)
    } else {
        None
    };
    let misfit_bound = if bounds_apply { misfit_bound_check(a, params.p, params.q, outcome.j_min)? } else { None };

    let rel_inv_diff = if f.rank == 0 { None } else { Some(rel_inverse_diff(x, a, f.rank_tol)?) };

    Ok(Report {
        m,
        n,
        p: params.p,
        q: params.q,
        rank: f.rank,
        kappa_a: f.kappa,
        nnz_a,
        nnz_x,
        density_x: nnz_x as f64 / (m * n) as f64,
        j_min: outcome.j_min,
        grad_residual: outcome.grad_residual,
        nullspace_residual: outcome.nullspace_residual,
        cond_x,
        cond_pinva_x,
        cond_x_pinva,
        cluster_radius: cluster.radius,
        max_eig_distance: cluster.max_distance,
        cluster_ok: cluster.ok,
        cond_bound: cond_bound.map(|b| b.rhs),
        cond_bound_ok: cond_bound.map(|b| b.ok),
        apriori_lhs: apriori.map(|b| b.lhs),
        apriori_rhs: apriori.map(|b| b.rhs),
        apriori_bound_ok: apriori.map(|b| b.ok),
        apriori_margin: apriori.map(|b| b.margin()),
        misfit_bound: misfit_bound.map(|b| b.rhs),
        misfit_bound_ok: misfit_bound.map(|b| b.ok),
        misfit_margin: misfit_bound.map(|b| b.margin()),
        rel_inv_diff,
        subspace_residuals: subspace_residuals(x),
    })
}
