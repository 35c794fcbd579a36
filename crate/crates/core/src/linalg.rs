//! Dense SVD helpers with explicit field dispatch.
//!
//! Matrices are always stored complex. For real-field data the imaginary
//! parts are dropped and the factorization runs over `f64`, so kernels and
//! ranges of real matrices come back real.

use nalgebra::{ComplexField, DMatrix};
use num_complex::Complex64;

use crate::series::Field;

pub(crate) type CMatrix = DMatrix<Complex64>;

pub(crate) struct Svd {
    pub u: CMatrix,
    pub s: Vec<f64>,
    pub v: CMatrix,
}

fn to_real(a: &CMatrix) -> DMatrix<f64> {
    a.map(|c| c.re)
}

fn from_real(a: &DMatrix<f64>) -> CMatrix {
    a.map(|x| Complex64::new(x, 0.0))
}

/// Thin SVD over `T`, singular values sorted in descending order. Returns
/// `U` (m×k), `σ`, and `V` (n×k) with k = min(m, n).
///
/// The Golub–Kahan result from nalgebra is accepted only if it reconstructs
/// `A` and has orthonormal factors to [`SVD_CHECK_TOL`]; on some tall
/// inputs it does not, and one-sided Jacobi is used instead.
fn svd_sorted<T>(a: DMatrix<T>) -> (DMatrix<T>, Vec<f64>, DMatrix<T>)
where
    T: ComplexField<RealField = f64>,
{
    let (m, n) = a.shape();
    let k = m.min(n);
    if k == 0 {
        return (DMatrix::zeros(m, 0), Vec::new(), DMatrix::zeros(n, 0));
    }
    let svd = nalgebra::SVD::new(a.clone(), true, true);
    let u = svd.u.expect("U requested");
    let v = svd.v_t.expect("V requested").adjoint();
    let sv: Vec<f64> = svd.singular_values.iter().copied().collect();
    let (u, sv, v) = if factorization_ok(&a, &u, &sv, &v) {
        (u, sv, v)
    } else if m >= n {
        jacobi_svd(a)
    } else {
        let (u, sv, v) = jacobi_svd(a.adjoint());
        (v, sv, u)
    };

    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&i, &j| sv[j].total_cmp(&sv[i]));

    let mut us = DMatrix::zeros(m, k);
    let mut vs = DMatrix::zeros(n, k);
    let mut s = Vec::with_capacity(k);
    for (dst, &src) in order.iter().enumerate() {
        us.set_column(dst, &u.column(src));
        vs.set_column(dst, &v.column(src));
        s.push(sv[src]);
    }
    (us, s, vs)
}

/// Relative backward-error bound a factorization must meet.
const SVD_CHECK_TOL: f64 = 1e-12;

fn factorization_ok<T>(a: &DMatrix<T>, u: &DMatrix<T>, s: &[f64], v: &DMatrix<T>) -> bool
where
    T: ComplexField<RealField = f64>,
{
    let k = s.len();
    let scale = a.norm().max(f64::MIN_POSITIVE);
    let mut us = u.clone();
    for (j, &x) in s.iter().enumerate() {
        us.column_mut(j).scale_mut(x);
    }
    let recon = (a - us * v.adjoint()).norm() / scale;
    let eye = DMatrix::<T>::identity(k, k);
    let ortho_u = (u.adjoint() * u - &eye).norm();
    let ortho_v = (v.adjoint() * v - &eye).norm();
    recon <= SVD_CHECK_TOL && ortho_u <= SVD_CHECK_TOL && ortho_v <= SVD_CHECK_TOL
}

/// One-sided (Hestenes) Jacobi SVD of a matrix with `m ≥ n`: rotates
/// column pairs of `A V` until they are mutually orthogonal. Columns with
/// zero norm get left singular vectors completed from the standard basis.
fn jacobi_svd<T>(a: DMatrix<T>) -> (DMatrix<T>, Vec<f64>, DMatrix<T>)
where
    T: ComplexField<RealField = f64>,
{
    let (m, n) = a.shape();
    debug_assert!(m >= n);
    let mut w = a;
    let mut v = DMatrix::<T>::identity(n, n);
    for _sweep in 0..80 {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = w.column(p).norm_squared();
                let beta = w.column(q).norm_squared();
                let gamma = w.column(p).dotc(&w.column(q));
                let g = gamma.clone().modulus();
                if g == 0.0 || g <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                // y ↦ e^{-iφ} y makes the pair's inner product real and positive
                let phase = gamma.conjugate().unscale(g);
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for mat in [&mut w, &mut v] {
                    for r in 0..mat.nrows() {
                        let x = mat[(r, p)].clone();
                        let y = mat[(r, q)].clone() * phase.clone();
                        mat[(r, p)] = x.clone().scale(c) - y.clone().scale(s);
                        mat[(r, q)] = x.scale(s) + y.scale(c);
                    }
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let s: Vec<f64> = (0..n).map(|j| w.column(j).norm()).collect();
    let mut u = DMatrix::<T>::zeros(m, n);
    let mut missing = Vec::new();
    for j in 0..n {
        if s[j] > 0.0 {
            u.set_column(j, &w.column(j).unscale(s[j]));
        } else {
            missing.push(j);
        }
    }
    let mut e = 0;
    for j in missing {
        while e < m {
            let mut x = DMatrix::<T>::zeros(m, 1);
            x[(e, 0)] = T::one();
            e += 1;
            for _ in 0..2 {
                let proj = u.adjoint() * &x;
                x -= &u * proj;
            }
            let norm = x.norm();
            if norm > 0.5 {
                u.set_column(j, &x.column(0).unscale(norm));
                break;
            }
        }
    }
    (u, s, v)
}

pub(crate) fn thin_svd(a: &CMatrix, field: Field) -> Svd {
    match field {
        Field::Real => {
            let (u, s, v) = svd_sorted(to_real(a));
            Svd {
                u: from_real(&u),
                s,
                v: from_real(&v),
            }
        }
        Field::Complex => {
            let (u, s, v) = svd_sorted(a.clone());
            Svd { u, s, v }
        }
    }
}

pub(crate) fn singular_values(a: &CMatrix, field: Field) -> Vec<f64> {
    if a.nrows() == 0 || a.ncols() == 0 {
        return Vec::new();
    }
    thin_svd(a, field).s
}

pub(crate) fn spectral_norm(a: &CMatrix, field: Field) -> f64 {
    singular_values(a, field).first().copied().unwrap_or(0.0)
}

/// Orthonormal basis of the column space, keeping directions with
/// singular value above `threshold`. Also returns all singular values.
pub(crate) fn range(a: &CMatrix, field: Field, threshold: f64) -> (CMatrix, Vec<f64>) {
    let svd = thin_svd(a, field);
    let r = svd.s.iter().take_while(|&&x| x > threshold).count();
    (svd.u.columns(0, r).into_owned(), svd.s)
}

/// Orthonormal basis of `{x : ‖a x‖ small}`, i.e. right singular vectors
/// whose singular value is at most `threshold` (rank-deficient directions of
/// a wide matrix included).
pub(crate) fn null_space(a: &CMatrix, field: Field, threshold: f64) -> CMatrix {
    let (m, n) = a.shape();
    if n == 0 {
        return CMatrix::zeros(0, 0);
    }
    let padded = if m < n {
        let mut p = CMatrix::zeros(n, n);
        p.rows_mut(0, m).copy_from(a);
        p
    } else {
        a.clone()
    };
    let svd = thin_svd(&padded, field);
    let keep: Vec<usize> = (0..n).filter(|&i| svd.s[i] <= threshold).collect();
    let mut out = CMatrix::zeros(n, keep.len());
    for (dst, &src) in keep.iter().enumerate() {
        out.set_column(dst, &svd.v.column(src));
    }
    out
}

/// Orthonormal basis of the orthogonal complement (inside the ambient
/// coordinate space) of the span of orthonormal columns `q`.
pub(crate) fn complement(q: &CMatrix, field: Field) -> CMatrix {
    if q.ncols() == 0 {
        return CMatrix::identity(q.nrows(), q.nrows());
    }
    null_space(&q.adjoint(), field, 0.5)
}

/// `a - q (qᴴ a)` for orthonormal `q`.
pub(crate) fn project_out(q: &CMatrix, a: &CMatrix) -> CMatrix {
    if q.ncols() == 0 {
        return a.clone();
    }
    a - q * (q.adjoint() * a)
}

/// Pads with zero rows up to `rows`.
pub(crate) fn pad_rows(a: &CMatrix, rows: usize) -> CMatrix {
    assert!(rows >= a.nrows());
    let mut out = CMatrix::zeros(rows, a.ncols());
    out.rows_mut(0, a.nrows()).copy_from(a);
    out
}

/// Rotates every column so its first entry with modulus above
/// `rel · ‖column‖` is real and positive.
pub(crate) fn canonical_phase(a: &mut CMatrix, rel: f64) {
    for mut col in a.column_iter_mut() {
        let norm = col.norm();
        if norm == 0.0 {
            continue;
        }
        if let Some(lead) = col.iter().copied().find(|c| c.norm() > rel * norm) {
            let phase = lead.conj() / lead.norm();
            col *= phase;
        }
    }
}

/// Backward shift applied to every column: rows move up by one.
pub(crate) fn backshift_rows(a: &CMatrix) -> CMatrix {
    let n = a.nrows();
    let mut out = CMatrix::zeros(n, a.ncols());
    if n > 1 {
        out.rows_mut(0, n - 1).copy_from(&a.rows(1, n - 1));
    }
    out
}

/// Block-diagonal backward shift on a stack of coefficient blocks of
/// length `block_order`.
pub(crate) fn block_backshift_rows(a: &CMatrix, block_order: usize) -> CMatrix {
    let blocks = a.nrows() / block_order;
    let mut out = CMatrix::zeros(a.nrows(), a.ncols());
    for b in 0..blocks {
        let rows = a.rows(b * block_order, block_order).into_owned();
        out.rows_mut(b * block_order, block_order)
            .copy_from(&backshift_rows(&rows));
    }
    out
}

/// Forward shift applied to every column: rows move down by one, the last
/// row is dropped.
pub(crate) fn shift_rows(a: &CMatrix) -> CMatrix {
    let n = a.nrows();
    let mut out = CMatrix::zeros(n, a.ncols());
    if n > 1 {
        out.rows_mut(1, n - 1).copy_from(&a.rows(0, n - 1));
    }
    out
}

/// Lower-triangular Toeplitz matrix of multiplication by `g`, mapping
/// `cols` input coefficients to `rows` output coefficients.
pub(crate) fn multiplication_matrix(g: &[Complex64], rows: usize, cols: usize) -> CMatrix {
    let mut m = CMatrix::zeros(rows, cols);
    for j in 0..cols {
        for (k, &gk) in g.iter().enumerate() {
            if j + k >= rows {
                break;
            }
            m[(j + k, j)] += gk;
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn null_space_of_wide_matrix() {
        let a = CMatrix::from_row_slice(1, 3, &[c(1.0), c(1.0), c(0.0)]);
        let k = null_space(&a, Field::Real, 1e-12);
        assert_eq!(k.ncols(), 2);
        assert!((&a * &k).norm() < 1e-14);
        assert!((k.adjoint() * &k - CMatrix::identity(2, 2)).norm() < 1e-14);
    }

    #[test]
    fn complement_dimensions() {
        let q = CMatrix::from_column_slice(3, 1, &[c(1.0), c(0.0), c(0.0)]);
        let comp = complement(&q, Field::Real);
        assert_eq!(comp.ncols(), 2);
        assert!((q.adjoint() * &comp).norm() < 1e-14);
    }

    #[test]
    fn range_sorted_and_thresholded() {
        let a = CMatrix::from_row_slice(2, 2, &[c(1.0), c(2.0), c(2.0), c(4.0)]);
        let (r, s) = range(&a, Field::Real, 1e-10);
        assert_eq!(r.ncols(), 1);
        assert!(s[0] >= s[1]);
    }

    #[test]
    fn multiplication_matrix_matches_convolution() {
        let g = [c(1.0), c(2.0)];
        let m = multiplication_matrix(&g, 3, 2);
        let expected = CMatrix::from_row_slice(3, 2, &[c(1.0), c(0.0), c(2.0), c(1.0), c(0.0), c(2.0)]);
        assert_eq!(m, expected);
    }

    fn check_factorization(a: &CMatrix, field: Field) {
        let svd = thin_svd(a, field);
        let k = svd.s.len();
        let mut us = svd.u.clone();
        for (j, &x) in svd.s.iter().enumerate() {
            us.column_mut(j).scale_mut(x);
        }
        assert!((a - us * svd.v.adjoint()).norm() <= 1e-12 * a.norm().max(1.0));
        assert!((svd.v.adjoint() * &svd.v - CMatrix::identity(k, k)).norm() <= 1e-12);
        assert!(svd.s.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn jacobi_matches_golub_kahan() {
        let a = DMatrix::<Complex64>::from_fn(40, 7, |i, j| {
            Complex64::new(((i * 7 + j * 3) % 11) as f64 - 5.0, ((i + 2 * j) % 5) as f64 - 2.0)
        });
        let (u, s, v) = jacobi_svd(a.clone());
        assert!(factorization_ok(&a, &u, &s, &v));
        let mut s = s;
        s.sort_by(|x, y| y.total_cmp(x));
        let reference = a.singular_values();
        for (x, y) in s.iter().zip(reference.iter()) {
            assert!((x - y).abs() <= 1e-12 * reference[0]);
        }
    }

    #[test]
    fn jacobi_completes_rank_deficient_columns() {
        let mut a = DMatrix::<f64>::zeros(6, 3);
        a[(0, 0)] = 1.0;
        a[(1, 0)] = 1.0;
        let (u, s, v) = jacobi_svd(a.clone());
        assert!(factorization_ok(&a, &u, &s, &v));
        assert_eq!(s.iter().filter(|&&x| x > 0.0).count(), 1);
    }

    #[test]
    fn factorizations_are_accurate_for_both_shapes() {
        let tall = CMatrix::from_fn(30, 4, |i, j| c(((i + 1) * (j + 2) % 7) as f64 - 3.0));
        check_factorization(&tall, Field::Real);
        check_factorization(&tall, Field::Complex);
        check_factorization(&tall.adjoint(), Field::Real);
    }
}
