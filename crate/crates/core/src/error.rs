use thiserror::Error;

use crate::series::Field;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LabError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("field mismatch: expected {expected}, found {found}")]
    FieldMismatch { expected: Field, found: Field },

    #[error("outside the admissible domain: {0}")]
    Domain(String),

    #[error("degenerate input: {0}")]
    Degenerate(&'static str),

    #[error("subspace is not contained in the enclosing subspace (residual {0:.3e})")]
    NotContained(f64),

    #[error("every element of the subspace vanishes at the origin; use the vanishing branch")]
    VanishesAtOrigin,

    #[error("subspace is not nearly invariant under the backward shift (defect {0})")]
    NotNearlyInvariant(usize),

    #[error("defect is zero; use the Hitt decomposition instead")]
    ZeroDefect,

    #[error("subspace is not shift invariant on the guard band (residual {0:.3e})")]
    NotShiftInvariant(f64),

    #[error("wandering subspace has dimension {0}, expected 1")]
    NotCyclic(usize),

    #[error("series is not inner (max boundary deviation {deviation:.3e}, tail {tail:.3e})")]
    NotInner { deviation: f64, tail: f64 },

    #[error("multiplier must satisfy g(0) > 0, got {0}")]
    Sign(f64),

    #[error("instance rejected: {0}")]
    Rejected(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error("malformed input: {0}")]
    Parse(String),
}

pub type Result<T, E = LabError> = std::result::Result<T, E>;
