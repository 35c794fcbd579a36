//! Finite Blaschke products and innerness certificates.
//!
//! Every inner function in this crate has the form
//! `front · z^k · Π (a_j − z) / (1 − conj(a_j) z)` with `|a_j| < 1`.
//! Coefficients of such a product decay geometrically at rate `max |a_j|`,
//! which gives a computable bound on the mass lost to truncation.

use std::cmp::Ordering;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::json::pair;
use crate::series::{Field, TruncatedSeries};

/// Tolerance used to decide unimodularity of the front constant and
/// conjugate pairing of zeros.
pub const SPEC_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BlaschkeLiteral", into = "BlaschkeLiteral")]
pub struct BlaschkeSpec {
    zeros: Vec<Complex64>,
    front: Complex64,
    monomial_order: usize,
}

fn canonical_order(a: &Complex64, b: &Complex64) -> Ordering {
    a.norm()
        .total_cmp(&b.norm())
        .then_with(|| a.arg().total_cmp(&b.arg()))
}

impl BlaschkeSpec {
    pub fn new(mut zeros: Vec<Complex64>, front: Complex64, monomial_order: usize) -> Result<Self> {
        if let Some(bad) = zeros.iter().find(|a| !(a.norm() < 1.0)) {
            return Err(LabError::Domain(format!("{bad}")));
        }
        if (front.norm() - 1.0).abs() > SPEC_TOL {
            return Err(LabError::Domain(format!("front constant {front} is not unimodular")));
        }
        zeros.sort_by(canonical_order);
        Ok(Self {
            zeros,
            front,
            monomial_order,
        })
    }

    /// `z^k`.
    pub fn monomial(k: usize) -> Self {
        Self {
            zeros: Vec::new(),
            front: Complex64::new(1.0, 0.0),
            monomial_order: k,
        }
    }

    /// Real zeros and conjugate pairs with front `±1`, chosen so the value
    /// at the origin is positive whenever it is nonzero.
    pub fn real_positive(zeros: Vec<Complex64>, monomial_order: usize) -> Result<Self> {
        let prod: Complex64 = zeros.iter().product();
        let front = if monomial_order == 0 && prod.re < 0.0 {
            -1.0
        } else {
            1.0
        };
        let spec = Self::new(zeros, Complex64::new(front, 0.0), monomial_order)?;
        if !spec.is_real_symmetric() {
            return Err(LabError::Domain(
                "zero set is not closed under conjugation".into(),
            ));
        }
        Ok(spec)
    }

    pub fn zeros(&self) -> &[Complex64] {
        &self.zeros
    }

    pub fn front(&self) -> Complex64 {
        self.front
    }

    pub fn monomial_order(&self) -> usize {
        self.monomial_order
    }

    pub fn degree(&self) -> usize {
        self.zeros.len() + self.monomial_order
    }

    pub fn max_modulus(&self) -> f64 {
        self.zeros.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }

    /// Value of the product at the origin.
    pub fn value_at_origin(&self) -> Complex64 {
        if self.monomial_order > 0 {
            return Complex64::new(0.0, 0.0);
        }
        self.front * self.zeros.iter().product::<Complex64>()
    }

    /// True iff the zero multiset is closed under conjugation and the
    /// front constant is `±1`; then all Taylor coefficients are real.
    pub fn is_real_symmetric(&self) -> bool {
        if self.front.im.abs() > SPEC_TOL {
            return false;
        }
        self.conjugate_pairing().is_some()
    }

    /// Splits zeros into real ones and conjugate pairs (one representative
    /// with positive imaginary part per pair).
    fn conjugate_pairing(&self) -> Option<(Vec<f64>, Vec<Complex64>)> {
        let mut reals = Vec::new();
        let mut upper = Vec::new();
        let mut lower: Vec<Complex64> = Vec::new();
        for &a in &self.zeros {
            if a.im.abs() <= SPEC_TOL {
                reals.push(a.re);
            } else if a.im > 0.0 {
                upper.push(a);
            } else {
                lower.push(a);
            }
        }
        if upper.len() != lower.len() {
            return None;
        }
        let mut used = vec![false; lower.len()];
        for a in &upper {
            let hit = lower
                .iter()
                .enumerate()
                .find(|(i, b)| !used[*i] && (a.conj() - **b).norm() <= SPEC_TOL)?;
            used[hit.0] = true;
        }
        Some((reals, upper))
    }

    /// Spec of the hat of the product: conjugated zeros and front.
    pub fn conjugated(&self) -> Self {
        let mut zeros: Vec<Complex64> = self.zeros.iter().map(|a| a.conj()).collect();
        zeros.sort_by(canonical_order);
        Self {
            zeros,
            front: self.front.conj(),
            monomial_order: self.monomial_order,
        }
    }

    /// Product of the two inner functions.
    pub fn concat(&self, other: &Self) -> Self {
        let mut zeros = self.zeros.clone();
        zeros.extend_from_slice(&other.zeros);
        zeros.sort_by(canonical_order);
        Self {
            zeros,
            front: self.front * other.front,
            monomial_order: self.monomial_order + other.monomial_order,
        }
    }

    /// Upper bound on `(Σ_{n ≥ from} |b_n|²)^{1/2}` for the Taylor
    /// coefficients `b_n` of the product.
    ///
    /// Each degree-one factor has coefficients bounded by `r^{m-1}`, so a
    /// product of `d` factors has `|p_m| ≤ C(m+d-1, d-1) r^{m-d}`.
    pub fn tail_bound(&self, from: usize) -> f64 {
        let d = self.zeros.len();
        let k = self.monomial_order;
        let r = self.max_modulus();
        if d == 0 || r == 0.0 {
            return 0.0;
        }
        let start = from.saturating_sub(k);
        let term = |m: usize| -> f64 {
            let mut binom = 1.0;
            for i in 1..d {
                binom *= (m + i) as f64 / i as f64;
            }
            binom * r.powi(m as i32 - d as i32)
        };
        let mut sum = 0.0;
        let mut m = start;
        loop {
            let t = term(m);
            sum += t * t;
            // terms are eventually decreasing; stop once negligible
            if m > start + d && (t * t <= sum * 1e-32 || t == 0.0) {
                break;
            }
            if m > start + 1_000_000 {
                return f64::INFINITY;
            }
            m += 1;
        }
        sum.sqrt()
    }
}

#[derive(Serialize, Deserialize)]
struct BlaschkeLiteral {
    #[serde(with = "crate::json::pair_vec")]
    zeros: Vec<Complex64>,
    #[serde(with = "pair")]
    front: Complex64,
    monomial_order: usize,
}

impl TryFrom<BlaschkeLiteral> for BlaschkeSpec {
    type Error = LabError;

    fn try_from(lit: BlaschkeLiteral) -> Result<Self> {
        BlaschkeSpec::new(lit.zeros, lit.front, lit.monomial_order)
    }
}

impl From<BlaschkeSpec> for BlaschkeLiteral {
    fn from(s: BlaschkeSpec) -> Self {
        Self {
            zeros: s.zeros,
            front: s.front,
            monomial_order: s.monomial_order,
        }
    }
}

fn apply_linear_factor<T>(c: &mut [T], a: T, a_conj: T)
where
    T: Copy + std::ops::Mul<Output = T> + std::ops::Sub<Output = T> + std::ops::Add<Output = T>,
{
    // multiply by (a - z), highest index first so c[n-1] is still the old value
    for n in (0..c.len()).rev() {
        c[n] = if n == 0 { a * c[0] } else { a * c[n] - c[n - 1] };
    }
    // divide by (1 - conj(a) z)
    for n in 1..c.len() {
        c[n] = c[n] + a_conj * c[n - 1];
    }
}

fn apply_conjugate_pair(c: &mut [f64], a: Complex64) {
    let two_re = 2.0 * a.re;
    let mod2 = a.norm_sqr();
    // multiply by |a|² − 2Re(a) z + z²
    for n in (0..c.len()).rev() {
        let mut v = mod2 * c[n];
        if n >= 1 {
            v -= two_re * c[n - 1];
        }
        if n >= 2 {
            v += c[n - 2];
        }
        c[n] = v;
    }
    // divide by 1 − 2Re(a) z + |a|² z²
    for n in 1..c.len() {
        let mut v = c[n] + two_re * c[n - 1];
        if n >= 2 {
            v -= mod2 * c[n - 2];
        }
        c[n] = v;
    }
}

fn product_coefficients(spec: &BlaschkeSpec, len: usize) -> Vec<Complex64> {
    let k = spec.monomial_order;
    let mut out = vec![Complex64::new(0.0, 0.0); len];
    if k >= len {
        return out;
    }
    let body = len - k;
    if let (true, Some((reals, pairs))) = (spec.front.im.abs() <= SPEC_TOL, spec.conjugate_pairing()) {
        let mut c = vec![0.0; body];
        c[0] = spec.front.re;
        for a in reals {
            apply_linear_factor(&mut c, a, a);
        }
        for a in pairs {
            apply_conjugate_pair(&mut c, a);
        }
        for (dst, v) in out[k..].iter_mut().zip(c) {
            *dst = Complex64::new(v, 0.0);
        }
    } else {
        let mut c = vec![Complex64::new(0.0, 0.0); body];
        c[0] = spec.front;
        for &a in &spec.zeros {
            apply_linear_factor(&mut c, a, a.conj());
        }
        out[k..].copy_from_slice(&c);
    }
    out
}

/// Taylor coefficients of the Blaschke product to `order` terms.
///
/// Real-symmetric specs are evaluated in real arithmetic (conjugate pairs
/// as real quadratic factors) and returned over the real field with exactly
/// zero imaginary parts. The spill is the mass of the discarded tail:
/// computed explicitly over an extension of the series plus the analytic
/// bound beyond it.
pub fn blaschke_series(spec: &BlaschkeSpec, order: usize) -> Result<TruncatedSeries> {
    if order == 0 {
        return Err(LabError::Degenerate("series order must be positive"));
    }
    if let Some(bad) = spec.zeros.iter().find(|a| !(a.norm() < 1.0)) {
        return Err(LabError::Domain(format!("{bad}")));
    }
    let step = order.max(32);
    let mut len = order;
    while spec.tail_bound(len) > 1e-30 && len < 16 * order + 256 {
        len += step;
    }
    let coeffs = product_coefficients(spec, len);
    let explicit: f64 = coeffs[order..].iter().map(|c| c.norm_sqr()).sum();
    let spill = explicit.sqrt().hypot(spec.tail_bound(len));
    let field = if spec.is_real_symmetric() {
        Field::Real
    } else {
        Field::Complex
    };
    Ok(TruncatedSeries::from_parts(field, coeffs[..order].to_vec(), spill))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InnerCertificate {
    pub pass: bool,
    pub max_deviation: f64,
    pub tail_bound: f64,
    pub grid_size: usize,
}

/// Smallest boundary grid accepted by [`is_inner`].
pub const MIN_GRID: usize = 64;

/// Samples `| |f(e^{it})| − 1 |` on a uniform grid and combines it with the
/// series' recorded tail mass. Grids smaller than [`MIN_GRID`] are raised to
/// it.
pub fn is_inner(f: &TruncatedSeries, grid_size: usize, tol: f64) -> InnerCertificate {
    let grid_size = grid_size.max(MIN_GRID);
    let max_deviation = (0..grid_size)
        .map(|j| {
            let t = 2.0 * PI * j as f64 / grid_size as f64;
            (f.horner(Complex64::from_polar(1.0, t)).norm() - 1.0).abs()
        })
        .fold(0.0, f64::max);
    let tail_bound = f.spill();
    InnerCertificate {
        pass: max_deviation <= tol && tail_bound <= tol,
        max_deviation,
        tail_bound,
        grid_size,
    }
}

/// True iff `‖f − f̂‖ ≤ tol · ‖f‖`.
pub fn is_hat_symmetric(f: &TruncatedSeries, tol: f64) -> bool {
    let defect = 2.0
        * f.coeffs()
            .iter()
            .map(|c| c.im * c.im)
            .sum::<f64>()
            .sqrt();
    defect <= tol * f.norm()
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedInner {
    /// Unimodular factor with `series = lambda · f`.
    pub lambda: Complex64,
    pub series: TruncatedSeries,
    pub real_symmetric: bool,
}

/// Rotates `f` so its first nonzero coefficient (modulus above
/// `tol · ‖f‖`) is real and positive. When the rotated series is
/// hat-symmetric within `tol` it is returned over the real field.
pub fn normalize_real_symmetric(f: &TruncatedSeries, tol: f64) -> Result<NormalizedInner> {
    let norm = f.norm();
    if norm == 0.0 {
        return Err(LabError::Degenerate("cannot normalize the zero series"));
    }
    let k = f
        .leading_index(tol * norm)
        .ok_or(LabError::Degenerate("no coefficient above threshold"))?;
    let lead = f.coeff(k);
    let lambda = lead.conj() / lead.norm();
    let rotated = f.scale(lambda);
    let real_symmetric = is_hat_symmetric(&rotated, tol);
    let series = if real_symmetric {
        rotated.symmetrize()
    } else {
        rotated.to_complex()
    };
    Ok(NormalizedInner {
        lambda,
        series,
        real_symmetric,
    })
}
