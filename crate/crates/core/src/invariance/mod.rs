//! Near invariance, defect spaces and the structure decompositions.
//!
//! Every procedure returns its verification residuals alongside the
//! result. Rank decisions use an absolute singular-value cutoff where the
//! operand columns are images of unit vectors under contractions, and a
//! cutoff relative to the largest singular value otherwise.

mod almost;
mod beurling;
mod certificate;
mod decomposition;
mod defect;
mod hitt;
mod lift;

pub use almost::check_almost_characterization;
pub use beurling::{beurling_extract, theta_psi_crosscheck, BeurlingExtraction};
pub use certificate::Certificate;
pub use decomposition::{
    certify_decomposition, decompose_with_defect, defect_decompose, DefectCase, DefectDecomposition,
    DECOMPOSITION_TOL,
};
pub use defect::{
    almost_defect, defect, extract_g, is_nearly_invariant, near_invariance_residual, DefectReport,
};
pub use hitt::{
    certify_hitt, hitt_decompose, HittDecomposition, HITT_ISOMETRY_TOL, HITT_REP_TOL, ISOMETRY_SAMPLES,
};
