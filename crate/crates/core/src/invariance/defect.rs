use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::linalg::{self, CMatrix};
use crate::series::TruncatedSeries;
use crate::subspace::Subspace;

/// Defect of a subspace together with the canonical defect space
/// `range((I − P_M) T* W)`.
///
/// `residual_singular_values` are all singular values of that matrix in
/// descending order; the defect counts those above `tol_used`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DefectReport {
    pub defect: usize,
    pub defect_basis: Subspace,
    pub residual_singular_values: Vec<f64>,
    pub tol_used: f64,
}

fn require_nonzero(m: &Subspace) -> Result<()> {
    if m.is_zero() {
        return Err(LabError::Degenerate("subspace must be nonzero"));
    }
    Ok(())
}

/// `(I − P_M) T* B` for the columns of `b`.
pub(crate) fn escape_matrix(m: &Subspace, b: &CMatrix) -> CMatrix {
    linalg::project_out(m.basis(), &linalg::backshift_rows(b))
}

fn report_from(m: &Subspace, r: &CMatrix, rank_tol: f64) -> DefectReport {
    let field = m.field();
    // columns of r are images of unit vectors under a contraction, so the
    // threshold is absolute
    let (basis, s) = linalg::range(r, field, rank_tol);
    let mut basis = basis;
    linalg::canonical_phase(&mut basis, 1e-8);
    if field == crate::Field::Real {
        basis.apply(|c| c.im = 0.0);
    }
    DefectReport {
        defect: basis.ncols(),
        defect_basis: Subspace::from_basis_unchecked(field, basis),
        residual_singular_values: s,
        tol_used: rank_tol,
    }
}

/// Smallest `ℱ ⊥ M` with `T*(M ∩ zH²) ⊂ M ⊕ ℱ`, at rank threshold
/// `rank_tol`.
pub fn defect(m: &Subspace, rank_tol: f64) -> Result<DefectReport> {
    require_nonzero(m)?;
    let w = m.intersect_zh();
    Ok(report_from(m, &escape_matrix(m, w.basis()), rank_tol))
}

/// Smallest `ℱ ⊥ M` with `T* M ⊂ M ⊕ ℱ`.
pub fn almost_defect(m: &Subspace, rank_tol: f64) -> Result<DefectReport> {
    require_nonzero(m)?;
    Ok(report_from(m, &escape_matrix(m, m.basis()), rank_tol))
}

/// Largest `‖T* w − P_M T* w‖` over an orthonormal basis `{w_j}` of
/// `M ∩ zH²`. Each `T* w_j` has unit norm, so this is also the relative
/// residual.
pub fn near_invariance_residual(m: &Subspace) -> Result<f64> {
    require_nonzero(m)?;
    let w = m.intersect_zh();
    let r = escape_matrix(m, w.basis());
    Ok(r.column_iter().map(|c| c.norm()).fold(0.0, f64::max))
}

/// True iff every `T* w_j` lies in `M` within `tol`.
pub fn is_nearly_invariant(m: &Subspace, tol: f64) -> Result<bool> {
    Ok(near_invariance_residual(m)? <= tol)
}

/// The unit vector of `M ⊖ (M ∩ zH²)` with positive value at the origin.
pub fn extract_g(m: &Subspace) -> Result<TruncatedSeries> {
    require_nonzero(m)?;
    let w = m.intersect_zh();
    if w.dim() == m.dim() {
        return Err(LabError::VanishesAtOrigin);
    }
    let comp = m.complement_in(&w)?;
    if comp.dim() != 1 {
        return Err(LabError::Internal(format!(
            "complement of M ∩ zH² has dimension {}",
            comp.dim()
        )));
    }
    let g = comp.column(0);
    let g0 = g.coeff(0);
    let g = g.scale(g0.conj() / g0.norm());
    // rotation leaves rounding-level imaginary noise on real data
    Ok(match m.field() {
        crate::Field::Real => g.symmetrize(),
        crate::Field::Complex => g,
    })
}
