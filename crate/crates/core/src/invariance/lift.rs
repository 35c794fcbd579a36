//! Canonical isometric lift of a nearly invariant subspace with finite
//! defect.
//!
//! For `f ∈ M` set `a = f(0)/g(0)`, `r = f − a g ∈ M ∩ zH²`, `t = T* r`,
//! `c_i = ⟨t, e_i⟩` and continue with `P_M t`. Then
//! `f = g h + z Σ h_i e_i` with `h = Σ a_k z^k`, `h_i = Σ c_{k,i} z^k`, and
//! since `g ⊥ r` and `e_i ⊥ M` each step splits the norm orthogonally:
//! `‖f‖² = ‖h‖² + Σ ‖h_i‖²` up to the mass left in the final iterate.

use crate::error::{LabError, Result};
use crate::linalg::{self, CMatrix};
use crate::series::TruncatedSeries;
use crate::subspace::Subspace;

pub(crate) struct Lift {
    /// Stacked coefficient vectors `(h, h_1, …, h_n)` (or `(h_1, …, h_n)`
    /// without `g`), one column per basis vector of `M`.
    pub stacked: CMatrix,
    /// Largest norm left in the iterate after the last step.
    pub residual: f64,
    /// Largest component of some `t` outside `M ⊕ ℱ`.
    pub escape: f64,
}

pub(crate) fn canonical_lift(m: &Subspace, g: Option<&TruncatedSeries>, e: &Subspace) -> Result<Lift> {
    let order = m.order();
    let d = m.dim();
    let n = e.dim();
    let blocks = n + usize::from(g.is_some());
    if blocks == 0 {
        return Err(LabError::Degenerate("lift needs g or a defect space"));
    }
    let b = m.basis();
    let eb = e.basis();
    let mut stacked = CMatrix::zeros(blocks * order, d);
    let mut f = b.clone();
    let mut escape = 0.0f64;
    let offset = usize::from(g.is_some()) * order;
    for k in 0..order {
        let r = match g {
            Some(g) => {
                let g0 = g.coeff(0);
                let a = f.row(0).map(|x| x / g0);
                for j in 0..d {
                    stacked[(k, j)] = a[j];
                }
                &f - g.to_vector() * a
            }
            None => f.clone(),
        };
        let t = linalg::backshift_rows(&r);
        let c = eb.adjoint() * &t;
        for i in 0..n {
            for j in 0..d {
                stacked[(offset + i * order + k, j)] = c[(i, j)];
            }
        }
        f = b * (b.adjoint() * &t);
        let leak = &t - &f - eb * &c;
        escape = escape.max(leak.column_iter().map(|c| c.norm()).fold(0.0, f64::max));
        if f.norm() <= 1e-18 {
            break;
        }
    }
    let residual = f.column_iter().map(|c| c.norm()).fold(0.0, f64::max);
    Ok(Lift {
        stacked,
        residual,
        escape,
    })
}
