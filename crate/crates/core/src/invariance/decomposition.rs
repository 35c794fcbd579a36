use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::certificate::Certificate;
use super::defect::{extract_g, DefectReport};
use super::hitt::{isometry_defect, multiplier, ISOMETRY_SAMPLES};
use super::lift::canonical_lift;
use crate::error::{LabError, Result};
use crate::linalg::{self, CMatrix};
use crate::series::{SeriesTuple, TruncatedSeries};
use crate::subspace::{projector_distance, Subspace};

/// Which branch of the representation applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DefectCase {
    /// Some element of `M` is nonzero at the origin: `f = g h + z Σ h_i e_i`.
    #[serde(rename = "i")]
    NonVanishing,
    /// Every element of `M` vanishes at the origin: `f = z Σ h_i e_i`.
    #[serde(rename = "ii")]
    Vanishing,
}

/// `M = {g h + z Σ h_i e_i : (h, h_1, …, h_n) ∈ N}` with verification
/// residuals.
///
/// `n` lives in the stacked space: blocks of `block_order` coefficients,
/// `(h, h_1, …, h_n)` in case i and `(h_1, …, h_n)` in case ii, with the
/// stacked ℓ² inner product.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DefectDecomposition {
    pub case: DefectCase,
    pub g: Option<TruncatedSeries>,
    pub defect_basis: Subspace,
    pub n: Subspace,
    pub block_order: usize,
    pub rep_error: f64,
    pub norm_identity_error: f64,
    pub invariance_error: f64,
    pub invariance_defect: usize,
    /// Mass left in the lift iterate after `block_order` steps.
    pub lift_residual: f64,
    /// Largest component of a lift step outside `M ⊕ ℱ`.
    pub lift_escape: f64,
    pub rank_tol: f64,
}

impl DefectDecomposition {
    /// Certifies the representation, the norm identity and stacked
    /// invariance of `N`.
    pub fn certificate(&self) -> Certificate {
        Certificate::new(
            "M = {g h + z Σ h_i e_i : (h, h_1, …, h_n) ∈ N} with the norm identity and N invariant under the stacked backward shift",
        )
        .bound("rep_error", self.rep_error, DECOMPOSITION_TOL)
        .bound("norm_identity_error", self.norm_identity_error, DECOMPOSITION_TOL)
        .bound("invariance_defect", self.invariance_defect as f64, 0.0)
        .metric("invariance_error", self.invariance_error)
        .metric("lift_residual", self.lift_residual)
        .metric("lift_escape", self.lift_escape)
        .metric("defect", self.defect_basis.dim() as f64)
    }

    pub fn blocks(&self) -> usize {
        self.n.order() / self.block_order
    }

    /// `g h + z Σ h_i e_i` at order `2N` (exact for order-`N` inputs).
    fn synthesis_matrix(&self) -> CMatrix {
        synthesis_matrix(self.g.as_ref(), &self.defect_basis)
    }

    /// Maps a stacked tuple to the function it represents, truncated to the
    /// working order; the discarded mass is recorded as spill.
    pub fn synthesize(&self, x: &SeriesTuple) -> Result<TruncatedSeries> {
        if x.len() != self.blocks() || x.block_order() != self.block_order {
            return Err(LabError::DimensionMismatch(x.stacked().len(), self.n.order()));
        }
        let v = nalgebra::DVector::from_vec(x.stacked());
        let full = self.synthesis_matrix() * v;
        let field = self.n.field().join(x.field());
        let long = TruncatedSeries::from_vector(field, &full);
        Ok(long.resize(self.block_order))
    }
}

fn synthesis_matrix(g: Option<&TruncatedSeries>, e: &Subspace) -> CMatrix {
    let order = e.order();
    let blocks = e.dim() + usize::from(g.is_some());
    let mut a = CMatrix::zeros(2 * order, blocks * order);
    let mut col = 0;
    if let Some(g) = g {
        a.columns_mut(0, order).copy_from(&multiplier(g));
        col = order;
    }
    for ei in e.vectors() {
        // h_i ↦ z h_i e_i
        let mut ze = vec![Complex64::new(0.0, 0.0)];
        ze.extend_from_slice(ei.coeffs());
        a.columns_mut(col, order)
            .copy_from(&linalg::multiplication_matrix(&ze, 2 * order, order));
        col += order;
    }
    a
}

/// Represents `M` through its defect space.
///
/// `N` is the image of `M` under the canonical isometric lift (see the
/// `lift` module), which is invariant under the stacked backward shift by
/// construction. All residuals are measured independently of the lift: the
/// synthesis map is applied to `N` at order `2N` and compared with `M`.
pub fn defect_decompose(m: &Subspace, report: &DefectReport) -> Result<DefectDecomposition> {
    if report.defect == 0 {
        return Err(LabError::ZeroDefect);
    }
    let order = m.order();
    let field = m.field();
    let rank_tol = report.tol_used;
    let e = &report.defect_basis;
    let (case, g) = match extract_g(m) {
        Ok(g) => (DefectCase::NonVanishing, Some(g)),
        Err(LabError::VanishesAtOrigin) => (DefectCase::Vanishing, None),
        Err(other) => return Err(other),
    };

    let lift = canonical_lift(m, g.as_ref(), e)?;
    let n = Subspace::from_matrix(field, &lift.stacked, rank_tol);

    let a = synthesis_matrix(g.as_ref(), e);
    let image = Subspace::from_matrix(field, &(&a * n.basis()), rank_tol);
    let m2 = Subspace::from_basis_unchecked(field, linalg::pad_rows(m.basis(), 2 * order));
    let rep_error = projector_distance(&image, &m2)?;
    // |‖A x‖ − 1| ≤ ε implies |‖A x‖² − ‖x‖²| ≤ 2ε + ε² for unit x
    let iso = isometry_defect(&a, n.basis(), field, ISOMETRY_SAMPLES);
    let norm_identity_error = 2.0 * iso + iso * iso;

    let shifted = linalg::block_backshift_rows(n.basis(), order);
    let r = linalg::project_out(n.basis(), &shifted);
    let (_, s) = linalg::range(&r, field, rank_tol);
    let invariance_error = s.first().copied().unwrap_or(0.0);
    let invariance_defect = s.iter().filter(|&&x| x > rank_tol).count();

    Ok(DefectDecomposition {
        case,
        g,
        defect_basis: e.clone(),
        n,
        block_order: order,
        rep_error,
        norm_identity_error,
        invariance_error,
        invariance_defect,
        lift_residual: lift.residual,
        lift_escape: lift.escape,
        rank_tol,
    })
}

/// Convenience wrapper: computes the defect report first.
pub fn decompose_with_defect(m: &Subspace, rank_tol: f64) -> Result<DefectDecomposition> {
    let report = super::defect::defect(m, rank_tol)?;
    defect_decompose(m, &report)
}

/// Tolerance on `rep_error` and the norm identity.
pub const DECOMPOSITION_TOL: f64 = 1e-6;

/// Runs the defect decomposition and returns its certificate.
pub fn certify_decomposition(m: &Subspace, rank_tol: f64) -> Result<Certificate> {
    let d = decompose_with_defect(m, rank_tol)?;
    Ok(d.certificate().with_instance(serde_json::json!({
        "order": m.order(),
        "dim": m.dim(),
        "case": d.case,
        "rank_tol": rank_tol,
    })))
}
