//! Truncated Hardy-space arithmetic over the real and complex fields,
//! subspace algebra, and near-invariance decompositions for the backward
//! shift, with residual certificates on every result.
//!
//! The guide in `book/` walks through the concepts; its code listings are
//! compiled as doctests of this crate.

pub mod error;
pub mod generators;
pub mod inner;
pub mod invariance;
mod json;
mod linalg;
pub mod rng;
pub mod series;
pub mod subspace;

pub use error::{LabError, Result};
pub use series::{Field, SeriesTuple, TruncatedSeries};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/series.md")]
    mod series {}
    #[doc = include_str!("../../../book/src/inner.md")]
    mod inner {}
    #[doc = include_str!("../../../book/src/subspaces.md")]
    mod subspaces {}
    #[doc = include_str!("../../../book/src/invariance.md")]
    mod invariance {}
    #[doc = include_str!("../../../book/src/generators.md")]
    mod generators {}
}
