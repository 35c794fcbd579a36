//! Hardy-space functions stored as their first `N` Taylor coefficients.
//!
//! A [`TruncatedSeries`] is exact at its truncation order. Operations that
//! would push mass past the last coefficient drop it and record the dropped
//! ℓ² mass in [`TruncatedSeries::spill`], so downstream checks can bound the
//! truncation error instead of silently absorbing it.

use std::fmt;

use nalgebra::DVector;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::json::Scalar;

/// Scalar field of a series or subspace.
///
/// `Real` marks elements of the real Hardy space: every coefficient has an
/// imaginary part of exactly zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Real,
    Complex,
}

impl Field {
    /// The smallest field containing both operands.
    pub fn join(self, other: Field) -> Field {
        if self == Field::Real && other == Field::Real {
            Field::Real
        } else {
            Field::Complex
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Real => f.write_str("real"),
            Field::Complex => f.write_str("complex"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SeriesLiteral", into = "SeriesLiteral")]
pub struct TruncatedSeries {
    coeffs: Vec<Complex64>,
    field: Field,
    spill: f64,
}

impl TruncatedSeries {
    /// Builds a series over `field`. Real-field input with a nonzero
    /// imaginary part is rejected.
    pub fn new(field: Field, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(LabError::Degenerate("series order must be positive"));
        }
        if field == Field::Real && coeffs.iter().any(|c| c.im != 0.0) {
            return Err(LabError::FieldMismatch {
                expected: Field::Real,
                found: Field::Complex,
            });
        }
        Ok(Self {
            coeffs,
            field,
            spill: 0.0,
        })
    }

    pub fn real(coeffs: &[f64]) -> Self {
        assert!(!coeffs.is_empty(), "series order must be positive");
        Self {
            coeffs: coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
            field: Field::Real,
            spill: 0.0,
        }
    }

    pub fn complex(coeffs: Vec<Complex64>) -> Self {
        assert!(!coeffs.is_empty(), "series order must be positive");
        Self {
            coeffs,
            field: Field::Complex,
            spill: 0.0,
        }
    }

    pub fn zero(order: usize, field: Field) -> Self {
        assert!(order > 0, "series order must be positive");
        Self {
            coeffs: vec![Complex64::new(0.0, 0.0); order],
            field,
            spill: 0.0,
        }
    }

    /// `z^k` at the given order (zero if `k >= order`).
    pub fn monomial(k: usize, order: usize) -> Self {
        let mut s = Self::zero(order, Field::Real);
        if k < order {
            s.coeffs[k] = Complex64::new(1.0, 0.0);
        }
        s
    }

    /// Pads the real or complex coefficients with zeros up to `order`.
    pub fn padded(field: Field, coeffs: &[Complex64], order: usize) -> Result<Self> {
        if coeffs.len() > order {
            return Err(LabError::DimensionMismatch(coeffs.len(), order));
        }
        let mut c = coeffs.to_vec();
        c.resize(order, Complex64::new(0.0, 0.0));
        Self::new(field, c)
    }

    pub(crate) fn from_parts(field: Field, coeffs: Vec<Complex64>, spill: f64) -> Self {
        debug_assert!(field == Field::Complex || coeffs.iter().all(|c| c.im == 0.0));
        Self {
            coeffs,
            field,
            spill,
        }
    }

    pub(crate) fn from_vector(field: Field, v: &DVector<Complex64>) -> Self {
        let mut coeffs: Vec<Complex64> = v.iter().copied().collect();
        if field == Field::Real {
            for c in &mut coeffs {
                c.im = 0.0;
            }
        }
        Self::from_parts(field, coeffs, 0.0)
    }

    pub(crate) fn to_vector(&self) -> DVector<Complex64> {
        DVector::from_column_slice(&self.coeffs)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// ℓ² mass of coefficients discarded by the operations that produced
    /// this series.
    pub fn spill(&self) -> f64 {
        self.spill
    }

    pub fn with_spill(mut self, spill: f64) -> Self {
        assert!(spill >= 0.0, "spill must be nonnegative");
        self.spill = spill;
        self
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> Complex64 {
        self.coeffs[n]
    }

    /// Real parts of the coefficients.
    pub fn real_coeffs(&self) -> Vec<f64> {
        self.coeffs.iter().map(|c| c.re).collect()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.order() != other.order() {
            return Err(LabError::DimensionMismatch(self.order(), other.order()));
        }
        if self.field != other.field {
            return Err(LabError::FieldMismatch {
                expected: self.field,
                found: other.field,
            });
        }
        Ok(())
    }

    /// `Σ a_n conj(b_n)`.
    pub fn inner_product(&self, other: &Self) -> Result<Complex64> {
        self.check_compatible(other)?;
        Ok(self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a * b.conj())
            .sum())
    }

    /// `F̂(z) = conj(F(conj z))`: coefficientwise conjugation.
    pub fn hat(&self) -> Self {
        if self.field == Field::Real {
            return self.clone();
        }
        Self {
            coeffs: self.coeffs.iter().map(|c| c.conj()).collect(),
            field: Field::Complex,
            spill: self.spill,
        }
    }

    /// `(F + F̂) / 2`, returned over the real field.
    pub fn symmetrize(&self) -> Self {
        Self {
            coeffs: self
                .coeffs
                .iter()
                .map(|c| Complex64::new(c.re, 0.0))
                .collect(),
            field: Field::Real,
            spill: self.spill,
        }
    }

    /// Unique split `F = F₁ + i F₂` with both parts real.
    pub fn real_imag_split(&self) -> (Self, Self) {
        let im = Self {
            coeffs: self
                .coeffs
                .iter()
                .map(|c| Complex64::new(c.im, 0.0))
                .collect(),
            field: Field::Real,
            spill: self.spill,
        };
        (self.symmetrize(), im)
    }

    /// Multiplication by `z`. The top coefficient falls off the end and is
    /// added to the spill in quadrature.
    pub fn shift(&self) -> Self {
        let n = self.order();
        let dropped = self.coeffs[n - 1].norm();
        let mut coeffs = Vec::with_capacity(n);
        coeffs.push(Complex64::new(0.0, 0.0));
        coeffs.extend_from_slice(&self.coeffs[..n - 1]);
        Self {
            coeffs,
            field: self.field,
            spill: self.spill.hypot(dropped),
        }
    }

    /// Backward shift `(F - F(0)) / z`.
    pub fn backshift(&self) -> Self {
        let mut coeffs = self.coeffs[1..].to_vec();
        coeffs.push(Complex64::new(0.0, 0.0));
        Self {
            coeffs,
            field: self.field,
            spill: self.spill,
        }
    }

    /// Truncated Cauchy product with `out_order` coefficients. The spill is
    /// the ℓ² norm of the discarded part of the exact product.
    pub fn multiply(&self, other: &Self, out_order: usize) -> Result<Self> {
        if self.field != other.field {
            return Err(LabError::FieldMismatch {
                expected: self.field,
                found: other.field,
            });
        }
        if out_order == 0 {
            return Err(LabError::Degenerate("series order must be positive"));
        }
        let full = self.order() + other.order() - 1;
        let mut prod = vec![Complex64::new(0.0, 0.0); full.max(out_order)];
        for (i, a) in self.coeffs.iter().enumerate() {
            if *a == Complex64::new(0.0, 0.0) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                prod[i + j] += a * b;
            }
        }
        let tail: f64 = prod[out_order..].iter().map(|c| c.norm_sqr()).sum();
        prod.truncate(out_order);
        if self.field == Field::Real {
            for c in &mut prod {
                c.im = 0.0;
            }
        }
        Ok(Self {
            coeffs: prod,
            field: self.field,
            spill: tail.sqrt(),
        })
    }

    /// Horner evaluation of the truncated polynomial at `w`, `|w| < 1`.
    pub fn evaluate(&self, w: Complex64) -> Result<Complex64> {
        if w.norm() >= 1.0 {
            return Err(LabError::Domain(format!("{w}")));
        }
        Ok(self.horner(w))
    }

    /// Horner evaluation anywhere, including the unit circle.
    pub fn horner(&self, w: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * w + c)
    }

    /// `self + other`, over the joined field.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.order() != other.order() {
            return Err(LabError::DimensionMismatch(self.order(), other.order()));
        }
        Ok(Self {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
            field: self.field.join(other.field),
            spill: self.spill.hypot(other.spill),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    /// Scalar multiple. A non-real scalar promotes the result to the
    /// complex field.
    pub fn scale(&self, c: Complex64) -> Self {
        let field = if c.im == 0.0 {
            self.field
        } else {
            Field::Complex
        };
        Self {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
            field,
            spill: self.spill * c.norm(),
        }
    }

    /// Same coefficients reinterpreted over the complex field.
    pub fn to_complex(&self) -> Self {
        Self {
            field: Field::Complex,
            ..self.clone()
        }
    }

    /// Changes the order. Dropped coefficients are added to the spill.
    pub fn resize(&self, order: usize) -> Self {
        assert!(order > 0, "series order must be positive");
        let mut coeffs = self.coeffs.clone();
        let dropped: f64 = coeffs
            .get(order..)
            .map(|t| t.iter().map(|c| c.norm_sqr()).sum())
            .unwrap_or(0.0);
        coeffs.resize(order, Complex64::new(0.0, 0.0));
        Self {
            coeffs,
            field: self.field,
            spill: self.spill.hypot(dropped.sqrt()),
        }
    }

    /// Index of the first coefficient with modulus above `threshold`.
    pub fn leading_index(&self, threshold: f64) -> Option<usize> {
        self.coeffs.iter().position(|c| c.norm() > threshold)
    }
}

/// `m` series of a common order and field, identified with a function in
/// the `ℂ^m`-valued Hardy space.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesTuple {
    entries: Vec<TruncatedSeries>,
}

impl SeriesTuple {
    pub fn new(entries: Vec<TruncatedSeries>) -> Result<Self> {
        let first = entries
            .first()
            .ok_or(LabError::Degenerate("tuple must have at least one entry"))?;
        for e in &entries[1..] {
            if e.order() != first.order() {
                return Err(LabError::DimensionMismatch(first.order(), e.order()));
            }
            if e.field() != first.field() {
                return Err(LabError::FieldMismatch {
                    expected: first.field(),
                    found: e.field(),
                });
            }
        }
        Ok(Self { entries })
    }

    /// Splits a stacked coefficient vector into `len / block_order` entries.
    pub fn from_stacked(field: Field, stacked: &[Complex64], block_order: usize) -> Result<Self> {
        if block_order == 0 || stacked.len() % block_order != 0 {
            return Err(LabError::DimensionMismatch(stacked.len(), block_order));
        }
        let entries = stacked
            .chunks(block_order)
            .map(|c| TruncatedSeries::new(field, c.to_vec()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(entries)
    }

    pub fn entries(&self) -> &[TruncatedSeries] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn block_order(&self) -> usize {
        self.entries[0].order()
    }

    pub fn field(&self) -> Field {
        self.entries[0].field()
    }

    /// Coefficient vectors of all entries, concatenated.
    pub fn stacked(&self) -> Vec<Complex64> {
        self.entries
            .iter()
            .flat_map(|e| e.coeffs().iter().copied())
            .collect()
    }

    /// Componentwise backward shift.
    pub fn backshift(&self) -> Self {
        Self {
            entries: self.entries.iter().map(TruncatedSeries::backshift).collect(),
        }
    }

    pub fn hat(&self) -> Self {
        Self {
            entries: self.entries.iter().map(TruncatedSeries::hat).collect(),
        }
    }

    /// Stacked ℓ² norm.
    pub fn norm(&self) -> f64 {
        self.entries
            .iter()
            .map(TruncatedSeries::norm_sqr)
            .sum::<f64>()
            .sqrt()
    }
}

#[derive(Serialize, Deserialize)]
struct SeriesLiteral {
    field: Field,
    order: usize,
    coeffs: Vec<Scalar>,
}

impl TryFrom<SeriesLiteral> for TruncatedSeries {
    type Error = LabError;

    fn try_from(lit: SeriesLiteral) -> Result<Self> {
        if lit.coeffs.len() != lit.order {
            return Err(LabError::Parse(format!(
                "order {} but {} coefficients",
                lit.order,
                lit.coeffs.len()
            )));
        }
        let coeffs = lit
            .coeffs
            .iter()
            .map(|s| s.to_field(lit.field))
            .collect::<Result<Vec<_>>>()?;
        TruncatedSeries::new(lit.field, coeffs)
    }
}

impl From<TruncatedSeries> for SeriesLiteral {
    fn from(s: TruncatedSeries) -> Self {
        Self {
            field: s.field,
            order: s.order(),
            coeffs: s
                .coeffs
                .iter()
                .map(|&c| Scalar::from_field(c, s.field))
                .collect(),
        }
    }
}
