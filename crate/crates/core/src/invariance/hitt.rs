use nalgebra::DVector;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::defect::{almost_defect, defect, extract_g};
use super::certificate::Certificate;
use super::lift::canonical_lift;
use crate::error::{LabError, Result};
use crate::linalg::{self, CMatrix};
use crate::series::{Field, TruncatedSeries};
use crate::subspace::{projector_distance, Subspace};

/// Number of random unit combinations sampled by the isometry check.
pub const ISOMETRY_SAMPLES: usize = 100;

/// `M = g N` with verification residuals.
///
/// `rep_error` is the projector distance between `g N` and `M` (both at
/// order `2N`, where the product is exact). `isometry_error` is the largest
/// `|‖g h‖ − 1|` over unit `h ∈ N` sampled from the basis and random
/// combinations. `invariance_error` is the largest residual singular value
/// of `(I − P_N) T* N`, and `invariance_defect` counts those above the rank
/// threshold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HittDecomposition {
    pub g: TruncatedSeries,
    pub n: Subspace,
    pub rep_error: f64,
    pub isometry_error: f64,
    pub invariance_error: f64,
    pub invariance_defect: usize,
    /// Projector distance between `N` and the image of the canonical lift.
    pub lift_distance: f64,
    pub rank_tol: f64,
}

/// Multiplication by `g` from order `N` into order `2N`.
pub(crate) fn multiplier(g: &TruncatedSeries) -> CMatrix {
    let n = g.order();
    linalg::multiplication_matrix(g.coeffs(), 2 * n, n)
}

/// Largest `|‖A x‖ − 1|` over the columns of `basis` and `samples` random
/// unit combinations of them (fixed stream, so the check is reproducible).
pub(crate) fn isometry_defect(a: &CMatrix, basis: &CMatrix, field: Field, samples: usize) -> f64 {
    let d = basis.ncols();
    if d == 0 {
        return 0.0;
    }
    let image = a * basis;
    let mut worst = image
        .column_iter()
        .map(|c| (c.norm() - 1.0).abs())
        .fold(0.0, f64::max);
    let mut rng = ChaCha8Rng::seed_from_u64(0x15_0e7);
    for _ in 0..samples {
        let mut x = DVector::<Complex64>::from_fn(d, |_, _| {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = match field {
                Field::Real => 0.0,
                Field::Complex => StandardNormal.sample(&mut rng),
            };
            Complex64::new(re, im)
        });
        let norm = x.norm();
        if norm == 0.0 {
            continue;
        }
        x /= Complex64::new(norm, 0.0);
        worst = worst.max(((&image * x).norm() - 1.0).abs());
    }
    worst
}

/// Decomposes a nearly invariant subspace not contained in `zH²` as `g N`.
///
/// `N` is computed as `ker((I − P_M) G) ⊖ ker G` with `G` the multiplier of
/// `g` into order `2N`; kernels use the cutoff `rank_tol · σ_max(G)`. Works
/// over either field.
pub fn hitt_decompose(m: &Subspace, rank_tol: f64) -> Result<HittDecomposition> {
    let g = extract_g(m)?;
    let report = defect(m, rank_tol)?;
    if report.defect > 0 {
        return Err(LabError::NotNearlyInvariant(report.defect));
    }
    let order = m.order();
    let field = m.field();

    let gm = multiplier(&g);
    let m2 = linalg::pad_rows(m.basis(), 2 * order);
    let r = linalg::project_out(&m2, &gm);
    let thr = rank_tol * linalg::spectral_norm(&gm, field);
    let k1 = linalg::null_space(&r, field, thr);
    let k0 = linalg::null_space(&gm, field, thr);
    let k1 = Subspace::from_basis_unchecked(field, k1);
    let n_basis = if k0.ncols() == 0 {
        k1
    } else {
        k1.complement_in(&Subspace::from_basis_unchecked(field, k0))?
    };
    let mut basis = n_basis.basis().clone();
    linalg::canonical_phase(&mut basis, 1e-8);
    if field == Field::Real {
        basis.apply(|c| c.im = 0.0);
    }
    let n = Subspace::from_basis_unchecked(field, basis);

    let synthesized = Subspace::from_matrix(field, &(&gm * n.basis()), rank_tol);
    let m2 = Subspace::from_basis_unchecked(field, m2);
    let rep_error = projector_distance(&synthesized, &m2)?;
    let isometry_error = isometry_defect(&gm, n.basis(), field, ISOMETRY_SAMPLES);
    let inv = almost_defect(&n, rank_tol)?;
    let invariance_error = inv.residual_singular_values.first().copied().unwrap_or(0.0);

    let lifted = canonical_lift(m, Some(&g), &Subspace::zero(order, field))?;
    let lift_distance = projector_distance(&Subspace::from_matrix(field, &lifted.stacked, rank_tol), &n)?;

    Ok(HittDecomposition {
        g,
        n,
        rep_error,
        isometry_error,
        invariance_error,
        invariance_defect: inv.defect,
        lift_distance,
        rank_tol,
    })
}

/// Tolerances of the Hitt verification triple.
pub const HITT_REP_TOL: f64 = 1e-6;
pub const HITT_ISOMETRY_TOL: f64 = 1e-8;

impl HittDecomposition {
    /// Certifies `rep_error`, `isometry_error` and a zero invariance defect
    /// of `N`.
    pub fn certificate(&self) -> Certificate {
        Certificate::new("M = gN with N backward-shift invariant and multiplication by g isometric on N")
            .bound("rep_error", self.rep_error, HITT_REP_TOL)
            .bound("isometry_error", self.isometry_error, HITT_ISOMETRY_TOL)
            .bound("invariance_defect", self.invariance_defect as f64, 0.0)
            .metric("invariance_error", self.invariance_error)
            .metric("lift_distance", self.lift_distance)
            .metric("n_dim", self.n.dim() as f64)
    }
}

/// Runs [`hitt_decompose`] and returns its certificate. Precondition
/// failures surface as errors.
pub fn certify_hitt(m: &Subspace, rank_tol: f64) -> Result<Certificate> {
    Ok(hitt_decompose(m, rank_tol)?.certificate().with_instance(serde_json::json!({
        "order": m.order(),
        "dim": m.dim(),
        "rank_tol": rank_tol,
    })))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inner::{blaschke_series, BlaschkeSpec};
    use crate::subspace::{orthonormalize, DEFAULT_RANK_TOL};

    fn span(order: usize, vs: &[&[f64]]) -> Subspace {
        let vecs: Vec<_> = vs
            .iter()
            .map(|v| {
                let c: Vec<_> = v.iter().map(|&x| Complex64::new(x, 0.0)).collect();
                TruncatedSeries::padded(Field::Real, &c, order).unwrap()
            })
            .collect();
        orthonormalize(order, Field::Real, &vecs, DEFAULT_RANK_TOL).unwrap()
    }

    #[test]
    fn model_space_is_its_own_factor() {
        let m = span(32, &[&[1.0], &[0.0, 1.0], &[0.0, 0.0, 1.0]]);
        let h = hitt_decompose(&m, 1e-8).unwrap();
        assert!(h.g.sub(&TruncatedSeries::monomial(0, 32)).unwrap().norm() <= 1e-12);
        assert!(projector_distance(&h.n, &m).unwrap() <= 1e-12);
        assert!(h.rep_error <= 1e-12);
        assert!(h.isometry_error <= 1e-12);
        assert!(h.invariance_error <= 1e-12);
        assert_eq!(h.invariance_defect, 0);
    }

    #[test]
    fn one_plus_z_line() {
        let m = span(16, &[&[1.0, 1.0]]);
        let h = hitt_decompose(&m, 1e-8).unwrap();
        assert_eq!(h.n.dim(), 1);
        assert!(projector_distance(&h.n, &span(16, &[&[1.0]])).unwrap() <= 1e-12);
        assert!(h.rep_error <= 1e-12);
        assert!(h.isometry_error <= 1e-12);
        assert!(h.lift_distance <= 1e-12);
    }

    #[test]
    fn inner_multiple_of_model_space() {
        let order = 128;
        let g0 = blaschke_series(
            &BlaschkeSpec::real_positive(vec![Complex64::new(0.5, 0.0); 2], 0).unwrap(),
            order,
        )
        .unwrap();
        let vecs: Vec<_> = (0..2)
            .map(|k| g0.multiply(&TruncatedSeries::monomial(k, order), order).unwrap())
            .collect();
        let m = orthonormalize(order, Field::Real, &vecs, DEFAULT_RANK_TOL).unwrap();
        let h = hitt_decompose(&m, 1e-8).unwrap();
        assert!(h.rep_error <= 1e-6, "{}", h.rep_error);
        assert!(h.isometry_error <= 1e-8, "{}", h.isometry_error);
        assert_eq!(h.invariance_defect, 0);
        assert!(h.lift_distance <= 1e-8, "{}", h.lift_distance);
        assert!(h.g.coeff(0).re > 0.0);
        assert!((h.g.norm() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn complex_field_runs() {
        let m = span(16, &[&[1.0, 1.0], &[0.0, 1.0, 1.0]]);
        let hr = hitt_decompose(&m, 1e-8).unwrap();
        let hc = hitt_decompose(&m.complexify().unwrap(), 1e-8).unwrap();
        assert!(projector_distance(&hr.n.complexify().unwrap(), &hc.n).unwrap() <= 1e-10);
    }

    #[test]
    fn rejects_defective_input() {
        let m = span(8, &[&[1.0], &[0.0, 0.0, 1.0]]);
        assert!(matches!(hitt_decompose(&m, 1e-8), Err(LabError::NotNearlyInvariant(1))));
        let m = span(8, &[&[0.0, 1.0, 1.0], &[0.0, 1.0]]);
        assert_eq!(hitt_decompose(&m, 1e-8).unwrap_err(), LabError::VanishesAtOrigin);
    }
}
