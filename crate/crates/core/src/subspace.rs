//! Finite-dimensional subspaces of the order-`N` coefficient space.
//!
//! A [`Subspace`] stores a column-orthonormal `N × d` basis. Equality of
//! subspaces is measured by [`projector_distance`], the operator norm of the
//! difference of orthogonal projectors (the sine of the largest principal
//! angle when dimensions agree).
//!
//! Real subspaces have real bases. Moving between fields is always explicit:
//! [`Subspace::complexify`] forms `M + iM`, [`Subspace::symmetrize`] takes the
//! image under coefficientwise real part.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::json::Scalar;
use crate::linalg::{self, CMatrix};
use crate::series::{Field, TruncatedSeries};

/// Default relative singular-value cutoff for rank decisions.
pub const DEFAULT_RANK_TOL: f64 = 1e-8;

/// Default tolerance on `‖BᴴB − I‖` for stored bases.
pub const DEFAULT_ORTHO_TOL: f64 = 1e-10;

/// Containment residual accepted by [`Subspace::complement_in`].
pub const CONTAINMENT_TOL: f64 = 1e-8;

/// Threshold on the first-coefficient functional below which a subspace is
/// treated as vanishing at the origin.
pub const ORIGIN_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SubspaceLiteral", into = "SubspaceLiteral")]
pub struct Subspace {
    basis: CMatrix,
    field: Field,
    ortho_tol: f64,
}

fn orthonormality_residual(basis: &CMatrix) -> f64 {
    let d = basis.ncols();
    if d == 0 {
        return 0.0;
    }
    (basis.adjoint() * basis - CMatrix::identity(d, d))
        .iter()
        .map(|c| c.norm())
        .fold(0.0, f64::max)
}

fn stack_columns(order: usize, vectors: &[TruncatedSeries]) -> CMatrix {
    let mut a = CMatrix::zeros(order, vectors.len());
    for (j, v) in vectors.iter().enumerate() {
        a.set_column(j, &DVector::from_column_slice(v.coeffs()));
    }
    a
}

impl Subspace {
    pub fn zero(order: usize, field: Field) -> Self {
        Self {
            basis: CMatrix::zeros(order, 0),
            field,
            ortho_tol: DEFAULT_ORTHO_TOL,
        }
    }

    /// The whole order-`N` space.
    pub fn full(order: usize, field: Field) -> Self {
        Self {
            basis: CMatrix::identity(order, order),
            field,
            ortho_tol: DEFAULT_ORTHO_TOL,
        }
    }

    /// Wraps a basis that is already column-orthonormal, verifying it.
    pub fn from_orthonormal(field: Field, basis: DMatrix<Complex64>) -> Result<Self> {
        if basis.ncols() > basis.nrows() {
            return Err(LabError::DimensionMismatch(basis.ncols(), basis.nrows()));
        }
        if field == Field::Real && basis.iter().any(|c| c.im != 0.0) {
            return Err(LabError::FieldMismatch {
                expected: Field::Real,
                found: Field::Complex,
            });
        }
        let res = orthonormality_residual(&basis);
        if !(res <= DEFAULT_ORTHO_TOL) {
            return Err(LabError::Parse(format!(
                "basis is not orthonormal (residual {res:.3e})"
            )));
        }
        Ok(Self {
            basis,
            field,
            ortho_tol: DEFAULT_ORTHO_TOL,
        })
    }

    /// Orthonormal basis of the span of `matrix` columns, dropping
    /// directions with singular value at most `rank_tol · σ_max`.
    pub(crate) fn from_matrix(field: Field, matrix: &CMatrix, rank_tol: f64) -> Self {
        let order = matrix.nrows();
        if matrix.ncols() == 0 {
            return Self::zero(order, field);
        }
        let smax = linalg::spectral_norm(matrix, field);
        let (mut basis, _) = linalg::range(matrix, field, rank_tol * smax);
        linalg::canonical_phase(&mut basis, 1e-8);
        if field == Field::Real {
            basis.apply(|c| c.im = 0.0);
        }
        Self {
            basis,
            field,
            ortho_tol: DEFAULT_ORTHO_TOL,
        }
    }

    /// Like [`Subspace::from_matrix`] but with an absolute singular-value
    /// cutoff.
    pub(crate) fn from_matrix_abs(field: Field, matrix: &CMatrix, threshold: f64) -> Self {
        let (mut basis, _) = linalg::range(matrix, field, threshold);
        linalg::canonical_phase(&mut basis, 1e-8);
        if field == Field::Real {
            basis.apply(|c| c.im = 0.0);
        }
        Self {
            basis,
            field,
            ortho_tol: DEFAULT_ORTHO_TOL,
        }
    }

    pub(crate) fn from_basis_unchecked(field: Field, basis: CMatrix) -> Self {
        Self {
            basis,
            field,
            ortho_tol: DEFAULT_ORTHO_TOL,
        }
    }

    pub fn with_ortho_tol(mut self, tol: f64) -> Self {
        self.ortho_tol = tol;
        self
    }

    pub fn order(&self) -> usize {
        self.basis.nrows()
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn ortho_tol(&self) -> f64 {
        self.ortho_tol
    }

    pub fn basis(&self) -> &DMatrix<Complex64> {
        &self.basis
    }

    pub fn column(&self, j: usize) -> TruncatedSeries {
        TruncatedSeries::from_vector(self.field, &self.basis.column(j).into_owned())
    }

    pub fn vectors(&self) -> Vec<TruncatedSeries> {
        (0..self.dim()).map(|j| self.column(j)).collect()
    }

    /// `‖BᴴB − I‖_max` for the stored basis.
    pub fn orthonormality_residual(&self) -> f64 {
        orthonormality_residual(&self.basis)
    }

    fn check_order(&self, order: usize) -> Result<()> {
        if self.order() != order {
            return Err(LabError::DimensionMismatch(self.order(), order));
        }
        Ok(())
    }

    /// Orthogonal projection. Complex input onto a real subspace is
    /// projected through the embedding; real input onto a complex subspace
    /// is rejected.
    pub fn project(&self, f: &TruncatedSeries) -> Result<TruncatedSeries> {
        self.check_order(f.order())?;
        if self.field == Field::Complex && f.field() == Field::Real {
            return Err(LabError::FieldMismatch {
                expected: Field::Complex,
                found: Field::Real,
            });
        }
        let v = f.to_vector();
        let p = &self.basis * (self.basis.adjoint() * v);
        Ok(TruncatedSeries::from_vector(f.field(), &p))
    }

    /// True iff `‖f − P f‖ ≤ tol · ‖f‖`; the zero series is contained in
    /// every subspace. Fields are compared through the embedding.
    pub fn contains(&self, f: &TruncatedSeries, tol: f64) -> Result<bool> {
        self.check_order(f.order())?;
        let v = f.to_vector();
        let norm = v.norm();
        if norm == 0.0 {
            return Ok(true);
        }
        let r = &v - &self.basis * (self.basis.adjoint() * &v);
        Ok(r.norm() <= tol * norm)
    }

    /// `{f ∈ S : f(0) = 0}`, the kernel of the first-coefficient functional
    /// restricted to `S`.
    pub fn intersect_zh(&self) -> Subspace {
        self.intersect_zh_with(ORIGIN_TOL)
    }

    pub fn intersect_zh_with(&self, tol: f64) -> Subspace {
        if self.is_zero() {
            return self.clone();
        }
        let row = self.basis.rows(0, 1).into_owned();
        let kernel = linalg::null_space(&row, self.field, tol);
        let mut basis = &self.basis * kernel;
        linalg::canonical_phase(&mut basis, 1e-8);
        if self.field == Field::Real {
            basis.apply(|c| c.im = 0.0);
        }
        Self {
            basis,
            field: self.field,
            ortho_tol: self.ortho_tol,
        }
    }

    /// `S ⊖ T` for `T ⊂ S`.
    pub fn complement_in(&self, t: &Subspace) -> Result<Subspace> {
        self.check_order(t.order())?;
        let res = containment_residual(t, self)?;
        if res > CONTAINMENT_TOL {
            return Err(LabError::NotContained(res));
        }
        if t.is_zero() {
            return Ok(self.clone());
        }
        let field = self.field.join(t.field);
        // coordinates of T inside S; their orthocomplement in ℂ^{dim S}
        let coords = self.basis.adjoint() * &t.basis;
        let kernel = linalg::null_space(&coords.adjoint(), field, 0.5);
        let expected = self.dim() - t.dim();
        if kernel.ncols() != expected {
            return Err(LabError::Internal(format!(
                "complement has dimension {} instead of {expected}",
                kernel.ncols()
            )));
        }
        let mut basis = &self.basis * kernel;
        linalg::canonical_phase(&mut basis, 1e-8);
        if self.field == Field::Real {
            basis.apply(|c| c.im = 0.0);
        }
        Ok(Self {
            basis,
            field: self.field,
            ortho_tol: self.ortho_tol,
        })
    }

    /// Orthogonal complement inside the order-`N` space over the same
    /// field.
    pub fn orthocomplement(&self) -> Subspace {
        let mut basis = linalg::complement(&self.basis, self.field);
        linalg::canonical_phase(&mut basis, 1e-8);
        if self.field == Field::Real {
            basis.apply(|c| c.im = 0.0);
        }
        Self {
            basis,
            field: self.field,
            ortho_tol: self.ortho_tol,
        }
    }

    /// `Ŝ = {F̂ : F ∈ S}`. Conjugation preserves orthonormality.
    pub fn hat(&self) -> Subspace {
        Self {
            basis: self.basis.map(|c| c.conj()),
            field: self.field,
            ortho_tol: self.ortho_tol,
        }
    }

    /// `S + iS` for a real subspace.
    pub fn complexify(&self) -> Result<Subspace> {
        if self.field != Field::Real {
            return Err(LabError::FieldMismatch {
                expected: Field::Real,
                found: self.field,
            });
        }
        Ok(Self {
            basis: self.basis.clone(),
            field: Field::Complex,
            ortho_tol: self.ortho_tol,
        })
    }

    /// `φ(S)`: the real span of the real and imaginary parts of the basis
    /// columns. Real input is returned unchanged.
    pub fn symmetrize(&self) -> Subspace {
        self.symmetrize_with(DEFAULT_RANK_TOL)
    }

    pub fn symmetrize_with(&self, rank_tol: f64) -> Subspace {
        if self.field == Field::Real {
            return self.clone();
        }
        let (n, d) = self.basis.shape();
        let mut parts = CMatrix::zeros(n, 2 * d);
        for j in 0..d {
            let col = self.basis.column(j);
            parts.set_column(2 * j, &col.map(|c| Complex64::new(c.re, 0.0)));
            parts.set_column(2 * j + 1, &col.map(|c| Complex64::new(c.im, 0.0)));
        }
        Self::from_matrix(Field::Real, &parts, rank_tol)
    }

    /// Span of the union of two subspaces of the same order.
    pub fn join(&self, other: &Subspace, rank_tol: f64) -> Result<Subspace> {
        self.check_order(other.order())?;
        let field = self.field.join(other.field);
        let mut a = CMatrix::zeros(self.order(), self.dim() + other.dim());
        a.columns_mut(0, self.dim()).copy_from(&self.basis);
        a.columns_mut(self.dim(), other.dim()).copy_from(&other.basis);
        Ok(Self::from_matrix(field, &a, rank_tol))
    }
}

/// Orthonormal basis of the span of `vectors`, discarding directions with
/// singular value at most `rank_tol · σ_max`. Real vectors may be placed in a
/// complex subspace; complex vectors in a real one are rejected.
pub fn orthonormalize(
    order: usize,
    field: Field,
    vectors: &[TruncatedSeries],
    rank_tol: f64,
) -> Result<Subspace> {
    for v in vectors {
        if v.order() != order {
            return Err(LabError::DimensionMismatch(order, v.order()));
        }
        if field == Field::Real && v.field() == Field::Complex {
            return Err(LabError::FieldMismatch {
                expected: Field::Real,
                found: Field::Complex,
            });
        }
    }
    Ok(Subspace::from_matrix(
        field,
        &stack_columns(order, vectors),
        rank_tol,
    ))
}

/// `‖(I − P_b) P_a‖`: zero iff `a ⊂ b`.
pub fn containment_residual(a: &Subspace, b: &Subspace) -> Result<f64> {
    a.check_order(b.order())?;
    if a.is_zero() {
        return Ok(0.0);
    }
    let r = linalg::project_out(&b.basis, &a.basis);
    Ok(linalg::spectral_norm(&r, a.field.join(b.field)))
}

/// `‖P_a − P_b‖ = max(‖(I − P_b) P_a‖, ‖(I − P_a) P_b‖)`.
pub fn projector_distance(a: &Subspace, b: &Subspace) -> Result<f64> {
    Ok(containment_residual(a, b)?
        .max(containment_residual(b, a)?)
        .min(1.0))
}

#[derive(Serialize, Deserialize)]
struct SubspaceLiteral {
    field: Field,
    order: usize,
    basis: Vec<Vec<Scalar>>,
}

impl TryFrom<SubspaceLiteral> for Subspace {
    type Error = LabError;

    fn try_from(lit: SubspaceLiteral) -> Result<Self> {
        let mut basis = CMatrix::zeros(lit.order, lit.basis.len());
        for (j, col) in lit.basis.iter().enumerate() {
            if col.len() != lit.order {
                return Err(LabError::Parse(format!(
                    "column {j} has {} entries, expected {}",
                    col.len(),
                    lit.order
                )));
            }
            for (i, s) in col.iter().enumerate() {
                basis[(i, j)] = s.to_field(lit.field)?;
            }
        }
        Subspace::from_orthonormal(lit.field, basis)
    }
}

impl From<Subspace> for SubspaceLiteral {
    fn from(s: Subspace) -> Self {
        Self {
            field: s.field,
            order: s.order(),
            basis: s
                .basis
                .column_iter()
                .map(|col| col.iter().map(|&c| Scalar::from_field(c, s.field)).collect())
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn real_span(order: usize, vs: &[&[f64]]) -> Subspace {
        let vecs: Vec<_> = vs
            .iter()
            .map(|v| TruncatedSeries::padded(Field::Real, &v.iter().map(|&x| c(x, 0.0)).collect::<Vec<_>>(), order).unwrap())
            .collect();
        orthonormalize(order, Field::Real, &vecs, DEFAULT_RANK_TOL).unwrap()
    }

    fn complex_span(order: usize, vs: &[Vec<Complex64>]) -> Subspace {
        let vecs: Vec<_> = vs
            .iter()
            .map(|v| TruncatedSeries::padded(Field::Complex, v, order).unwrap())
            .collect();
        orthonormalize(order, Field::Complex, &vecs, DEFAULT_RANK_TOL).unwrap()
    }

    fn random_series(rng: &mut ChaCha8Rng, n: usize, field: Field) -> TruncatedSeries {
        let coeffs = (0..n)
            .map(|_| match field {
                Field::Real => c(rng.random_range(-1.0..1.0), 0.0),
                Field::Complex => c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
            })
            .collect();
        TruncatedSeries::new(field, coeffs).unwrap()
    }

    #[test]
    fn orthonormalize_examples() {
        assert_eq!(real_span(4, &[&[1.0, 1.0], &[2.0, 2.0]]).dim(), 1);
        let s = real_span(4, &[&[1.0], &[0.0, 1.0], &[0.0, 0.0, 1.0]]);
        assert_eq!(s.dim(), 3);
        assert!(projector_distance(&s, &real_span(4, &[&[0.0, 0.0, 1.0], &[1.0], &[0.0, 1.0]])).unwrap() < 1e-14);

        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let vs: Vec<_> = (0..50).map(|_| random_series(&mut rng, 32, Field::Real)).collect();
        let s = orthonormalize(32, Field::Real, &vs, DEFAULT_RANK_TOL).unwrap();
        assert!(s.dim() <= 32);
        assert!(s.orthonormality_residual() <= 1e-12);

        let z = orthonormalize(8, Field::Real, &[], DEFAULT_RANK_TOL).unwrap();
        assert!(z.is_zero());
    }

    #[test]
    fn orthonormalize_rejects_complex_into_real() {
        let v = TruncatedSeries::complex(vec![c(0.0, 1.0)]);
        assert!(orthonormalize(1, Field::Real, &[v], 1e-8).is_err());
    }

    #[test]
    fn project_examples() {
        let s = real_span(4, &[&[1.0]]);
        let f = TruncatedSeries::real(&[3.0, 4.0, 0.0, 0.0]);
        assert_eq!(s.project(&f).unwrap().real_coeffs(), vec![3.0, 0.0, 0.0, 0.0]);

        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let vs: Vec<_> = (0..5).map(|_| random_series(&mut rng, 64, Field::Complex)).collect();
        let s = orthonormalize(64, Field::Complex, &vs, DEFAULT_RANK_TOL).unwrap();
        let inside = s.column(2);
        assert!(s.project(&inside).unwrap().sub(&inside).unwrap().norm() <= 1e-12);

        let f = random_series(&mut rng, 64, Field::Complex);
        let p = s.project(&f).unwrap();
        let r = f.sub(&p).unwrap();
        assert!((r.norm_sqr() + p.norm_sqr() - f.norm_sqr()).abs() <= 1e-12 * f.norm_sqr());
        let pp = s.project(&p).unwrap();
        assert!(pp.sub(&p).unwrap().norm() <= 1e-12 * f.norm());
    }

    #[test]
    fn project_field_rules() {
        let real = real_span(2, &[&[1.0]]);
        let cf = TruncatedSeries::complex(vec![c(1.0, 2.0), c(0.0, 1.0)]);
        let p = real.project(&cf).unwrap();
        assert_eq!(p.coeffs(), &[c(1.0, 2.0), c(0.0, 0.0)]);
        let cs = real.complexify().unwrap();
        assert!(cs.project(&TruncatedSeries::real(&[1.0, 0.0])).is_err());
    }

    #[test]
    fn intersect_zh_examples() {
        let s = real_span(4, &[&[1.0], &[0.0, 1.0]]);
        let w = s.intersect_zh();
        assert!(projector_distance(&w, &real_span(4, &[&[0.0, 1.0]])).unwrap() < 1e-14);

        let s = real_span(4, &[&[0.0, 1.0], &[0.0, 0.0, 1.0]]);
        assert!(projector_distance(&s.intersect_zh(), &s).unwrap() < 1e-14);

        let s = real_span(4, &[&[1.0, 1.0]]);
        assert!(s.intersect_zh().is_zero());
    }

    #[test]
    fn complement_in_examples() {
        let s = real_span(4, &[&[1.0], &[0.0, 1.0]]);
        let t = real_span(4, &[&[0.0, 1.0]]);
        let d = s.complement_in(&t).unwrap();
        assert!(projector_distance(&d, &real_span(4, &[&[1.0]])).unwrap() < 1e-14);
        assert!(s.complement_in(&s).unwrap().is_zero());
        let z = Subspace::zero(4, Field::Real);
        assert!(projector_distance(&s.complement_in(&z).unwrap(), &s).unwrap() < 1e-14);

        let outside = real_span(4, &[&[0.0, 0.0, 1.0]]);
        assert!(matches!(s.complement_in(&outside), Err(LabError::NotContained(_))));
    }

    #[test]
    fn projector_distance_examples() {
        let a = real_span(4, &[&[1.0], &[0.0, 1.0]]);
        let b = real_span(4, &[&[0.0, 1.0], &[1.0]]);
        assert!(projector_distance(&a, &b).unwrap() <= 1e-12);

        let one = real_span(4, &[&[1.0]]);
        let z = real_span(4, &[&[0.0, 1.0]]);
        assert_abs_diff_eq!(projector_distance(&one, &z).unwrap(), 1.0, epsilon = 1e-15);

        // closed form: lines at angle atan(ε) have distance sin(atan ε) = ε/√(1+ε²)
        for eps in [1e-3, 1e-2, 0.1] {
            let tilt = real_span(4, &[&[1.0, eps]]);
            let expected = eps / (1.0 + eps * eps).sqrt();
            assert_abs_diff_eq!(projector_distance(&one, &tilt).unwrap(), expected, epsilon = 1e-12);
        }
    }

    #[test]
    fn hat_subspace_examples() {
        let r = real_span(4, &[&[1.0, 2.0], &[0.0, 0.0, 1.0]]);
        assert_eq!(r.hat(), r);
        assert!(projector_distance(&r.hat(), &r).unwrap() <= 1e-15);

        let s = complex_span(4, &[vec![c(0.0, 0.0), c(1.0, 1.0)]]);
        let z = complex_span(4, &[vec![c(0.0, 0.0), c(1.0, 0.0)]]);
        assert!(projector_distance(&s.hat(), &z).unwrap() <= 1e-14);

        // lines spanned by u = (1, i) and ū = (1, −i): |⟨u, ū⟩| / 2 = 0, so
        // the lines are orthogonal and the distance is sin(π/2) = 1
        let s = complex_span(4, &[vec![c(1.0, 0.0), c(0.0, 1.0)]]);
        let h = s.hat();
        let expected = complex_span(4, &[vec![c(1.0, 0.0), c(0.0, -1.0)]]);
        assert!(projector_distance(&h, &expected).unwrap() <= 1e-14);
        let cos = (1.0 + c(0.0, 1.0) * c(0.0, 1.0)).norm() / 2.0;
        let sin = (1.0 - cos * cos).sqrt();
        assert_abs_diff_eq!(projector_distance(&s, &h).unwrap(), sin, epsilon = 1e-14);

        // a generic oblique pair: u = (1, 0.3i), û = (1, −0.3i)
        let s = complex_span(4, &[vec![c(1.0, 0.0), c(0.0, 0.3)]]);
        let cos = (1.0 - 0.09) / 1.09;
        let sin = (1.0f64 - cos * cos).sqrt();
        assert_abs_diff_eq!(projector_distance(&s, &s.hat()).unwrap(), sin, epsilon = 1e-14);
    }

    #[test]
    fn complexify_and_symmetrize() {
        let r = real_span(4, &[&[1.0, 1.0]]);
        let cs = r.complexify().unwrap();
        assert_eq!(cs.field(), Field::Complex);
        assert!(projector_distance(&cs.hat(), &cs).unwrap() <= 1e-15);
        assert!(projector_distance(&cs.symmetrize(), &r).unwrap() <= 1e-12);
        assert!(cs.complexify().is_err());
        assert!(Subspace::zero(4, Field::Real).complexify().unwrap().is_zero());

        let s = complex_span(4, &[vec![c(1.0, 1.0), c(1.0, 1.0)]]);
        let phi = s.symmetrize();
        assert_eq!(phi.field(), Field::Real);
        assert!(projector_distance(&phi, &r).unwrap() <= 1e-12);

        let s = complex_span(4, &[vec![c(1.0, 0.0)], vec![c(0.0, 0.0), c(0.0, 1.0)]]);
        let phi = s.symmetrize();
        assert!(projector_distance(&phi, &real_span(4, &[&[1.0], &[0.0, 1.0]])).unwrap() <= 1e-12);
    }

    #[test]
    fn contains_examples() {
        let s = real_span(4, &[&[1.0], &[0.0, 1.0]]);
        assert!(s.contains(&TruncatedSeries::real(&[2.0, -3.0, 0.0, 0.0]), 1e-12).unwrap());
        let z = real_span(4, &[&[0.0, 1.0]]);
        assert!(!z.contains(&TruncatedSeries::real(&[1.0, 0.0, 0.0, 0.0]), 1e-12).unwrap());
        for v in s.vectors() {
            assert!(s.contains(&v, 1e-12).unwrap());
        }
        assert!(z.contains(&TruncatedSeries::zero(4, Field::Real), 1e-12).unwrap());
    }

    #[test]
    fn orthocomplement_dimension() {
        let s = real_span(6, &[&[1.0, 1.0], &[0.0, 0.0, 1.0]]);
        let c = s.orthocomplement();
        assert_eq!(c.dim(), 4);
        assert!(containment_residual(&c, &s.orthocomplement()).unwrap() < 1e-14);
        assert!((s.basis().adjoint() * c.basis()).norm() < 1e-14);
    }

    #[test]
    fn json_round_trip_reverifies() {
        let s = complex_span(3, &[vec![c(1.0, 0.5), c(0.1, -0.2)], vec![c(0.0, 0.0), c(0.3, 0.0), c(1.0, 1.0)]]);
        let text = serde_json::to_string(&s).unwrap();
        let back: Subspace = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
        assert_eq!(serde_json::to_string(&back).unwrap(), text);

        let r = real_span(2, &[&[1.0]]);
        assert_eq!(serde_json::to_string(&r).unwrap(), r#"{"field":"real","order":2,"basis":[[1.0,0.0]]}"#);

        let bad = r#"{"field":"real","order":2,"basis":[[1.0,1.0]]}"#;
        assert!(serde_json::from_str::<Subspace>(bad).is_err());
    }
}
