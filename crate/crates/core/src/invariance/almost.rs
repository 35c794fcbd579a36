use serde_json::json;

use super::certificate::Certificate;
use super::defect::{almost_defect, defect, escape_matrix, extract_g};
use crate::error::{LabError, Result};
use crate::linalg;
use crate::series::TruncatedSeries;
use crate::subspace::Subspace;

/// `‖(I − P_S) T* f‖` for a single series.
fn escape_of(s: &Subspace, f: &TruncatedSeries) -> f64 {
    let col = crate::linalg::CMatrix::from_column_slice(f.order(), 1, f.coeffs());
    let r = linalg::project_out(s.basis(), &linalg::backshift_rows(&col));
    r.norm()
}

/// Checks, on one instance, that `T* M ⊂ M ⊕ ℱ` (with `ℱ` the defect space
/// of near invariance) holds exactly when either every element of `M`
/// vanishes at the origin or `T* g ∈ M ⊕ ℱ`.
///
/// Both sides are decided at `tol`. The certificate also requires that the
/// left side agrees with the rank comparison `almost_defect = defect`.
pub fn check_almost_characterization(m: &Subspace, rank_tol: f64, tol: f64) -> Result<Certificate> {
    let report = defect(m, rank_tol)?;
    let almost = almost_defect(m, rank_tol)?;
    let mf = m.join(&report.defect_basis, rank_tol)?;

    let r = escape_matrix(&mf, m.basis());
    let almost_residual = linalg::spectral_norm(&r, m.field());
    let lhs = almost_residual <= tol;

    let (case, g_residual) = match extract_g(m) {
        Ok(g) => ("i", Some(escape_of(&mf, &g))),
        Err(LabError::VanishesAtOrigin) => ("ii", None),
        Err(other) => return Err(other),
    };
    let rhs = g_residual.is_none_or(|x| x <= tol);
    let ranks_agree = lhs == (almost.defect == report.defect);

    let mut cert = Certificate::new(
        "T*M ⊂ M ⊕ F iff M vanishes at the origin or T*g ∈ M ⊕ F",
    )
    .metric("defect", report.defect as f64)
    .metric("almost_defect", almost.defect as f64)
    .metric("almost_residual", almost_residual)
    .require("sides_agree", lhs == rhs)
    .require("ranks_agree", ranks_agree);
    if let Some(x) = g_residual {
        cert = cert.metric("g_residual", x);
    }
    Ok(cert.with_instance(json!({
        "order": m.order(),
        "dim": m.dim(),
        "case": case,
        "almost_invariant_same_defect": lhs,
        "tol": tol,
    })))
}
