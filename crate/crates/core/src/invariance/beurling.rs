use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::certificate::Certificate;
use super::hitt::hitt_decompose;
use crate::error::{LabError, Result};
use crate::inner::{is_hat_symmetric, is_inner, normalize_real_symmetric, InnerCertificate};
use crate::linalg::{self, CMatrix};
use crate::series::{Field, TruncatedSeries};
use crate::subspace::{orthonormalize, projector_distance, Subspace, DEFAULT_RANK_TOL};

/// Threshold on the top-coefficient functional deciding which elements of
/// `M` shift without loss.
const TOP_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BeurlingExtraction {
    /// Unit generator of the wandering subspace, first nonzero coefficient
    /// real and positive.
    pub theta: TruncatedSeries,
    /// Unimodular factor applied by the normalization.
    #[serde(with = "crate::json::pair")]
    pub lambda: Complex64,
    pub real_symmetric: bool,
    /// `‖(I − P_M) z M'‖` where `M'` holds the elements with zero top
    /// coefficient.
    pub shift_residual: f64,
    /// Projector distance between `span{z^j θ : j < dim M}` and `M`.
    pub span_distance: f64,
    pub inner: InnerCertificate,
}

/// Recovers the inner function `θ` of a shift-invariant `M = θH²` (at
/// truncation: the elements whose top coefficient vanishes must shift back
/// into `M`).
///
/// `θ` spans the wandering subspace `M ⊖ z M'`. Its tail beyond the order
/// is estimated by the mass of its top quarter of coefficients, which
/// feeds the innerness certificate.
pub fn beurling_extract(m: &Subspace, field: Field, tol: f64) -> Result<BeurlingExtraction> {
    if m.is_zero() {
        return Err(LabError::Degenerate("subspace must be nonzero"));
    }
    let m = match (m.field(), field) {
        (Field::Real, Field::Complex) => m.complexify()?,
        (Field::Complex, Field::Real) => {
            return Err(LabError::FieldMismatch {
                expected: Field::Real,
                found: Field::Complex,
            })
        }
        _ => m.clone(),
    };
    let order = m.order();
    let b = m.basis();

    let top = b.rows(order - 1, 1).into_owned();
    let kernel = linalg::null_space(&top, field, TOP_TOL);
    let inner_part = b * kernel;
    let shifted = linalg::shift_rows(&inner_part);
    let r = linalg::project_out(b, &shifted);
    let shift_residual = linalg::spectral_norm(&r, field);
    if shift_residual > tol {
        return Err(LabError::NotShiftInvariant(shift_residual));
    }

    let coords: CMatrix = b.adjoint() * &shifted;
    let wandering = linalg::null_space(&coords.adjoint(), field, 0.5);
    if wandering.ncols() != 1 {
        return Err(LabError::NotCyclic(wandering.ncols()));
    }
    let theta = TruncatedSeries::from_vector(field, &(b * wandering).column(0).into_owned());
    let normalized = normalize_real_symmetric(&theta, 1e-10)?;
    let theta = match field {
        Field::Real => normalized.series.symmetrize(),
        Field::Complex => normalized.series,
    };

    let mut powers = Vec::with_capacity(m.dim());
    let mut p = theta.clone();
    for _ in 0..m.dim() {
        powers.push(p.clone());
        p = p.shift();
    }
    let spanned = orthonormalize(order, field, &powers, DEFAULT_RANK_TOL)?;
    let span_distance = projector_distance(&spanned, &m)?;

    let tail: f64 = theta.coeffs()[order - order / 4..]
        .iter()
        .map(|c| c.norm_sqr())
        .sum::<f64>()
        .sqrt();
    let inner = is_inner(&theta.clone().with_spill(tail), (4 * order).max(512), tol);

    Ok(BeurlingExtraction {
        theta,
        lambda: normalized.lambda,
        real_symmetric: normalized.real_symmetric,
        shift_residual,
        span_distance,
        inner,
    })
}

/// Computes the inner function of the complement of `N` in two ways: from
/// the real decomposition `M = g N`, and from the decomposition of the
/// complexification `M + iM = g K`. Passes when the two agree and `K` is the
/// complexification of `N`.
pub fn theta_psi_crosscheck(m: &Subspace, rank_tol: f64, tol: f64) -> Result<Certificate> {
    let statement = "inner function of the complement of N equals that of the complexified path";
    let real = hitt_decompose(m, rank_tol)?;
    let order = m.order();
    if real.n.dim() == order {
        return Ok(Certificate::new(statement)
            .metric("n_dim", order as f64)
            .with_instance(json!({"order": order, "dim": m.dim(), "no_inner_factor": true})));
    }
    let psi = beurling_extract(&real.n.orthocomplement(), Field::Real, tol)?;

    let mc = m.complexify()?;
    let complex = hitt_decompose(&mc, rank_tol)?;
    let theta = beurling_extract(&complex.n.orthocomplement(), Field::Complex, tol)?;

    let diff = theta.theta.to_complex().sub(&psi.theta.to_complex())?.norm();
    let k_vs_n = projector_distance(&real.n.complexify()?, &complex.n)?;
    let hat_sym = theta.theta.sub(&theta.theta.hat())?.norm();

    Ok(Certificate::new(statement)
        .bound("theta_minus_psi", diff, tol)
        .bound("k_vs_complexified_n", k_vs_n, tol)
        .bound("theta_hat_asymmetry", hat_sym, tol)
        .bound("psi_boundary_deviation", psi.inner.max_deviation, tol)
        .bound("theta_boundary_deviation", theta.inner.max_deviation, tol)
        .require("theta_real_symmetric", is_hat_symmetric(&theta.theta, tol))
        .metric("n_dim", real.n.dim() as f64)
        .with_instance(json!({
            "order": order,
            "dim": m.dim(),
            "no_inner_factor": false,
            "psi": psi.theta,
        })))
}
