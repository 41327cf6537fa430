//! Finite-dimensional checks of Harte's ghost-of-an-index-theorem identity
//! and the kernel/range relations under invertible factors.
//!
//! For composable maps the six dimension quantities of a product satisfy
//!
//! ```text
//! α(T) + α(S) + β(ST) = α(ST) + β(T) + β(S)
//! ```
//!
//! where α is the kernel dimension and β the cokernel dimension. In finite
//! dimensions this is index additivity, and isomorphism of product spaces
//! is operationalized as equality of dimension sums — stated here once and
//! relied on everywhere (it also makes cancellation of finite summands
//! trivial, so no separate cancellation routine exists).

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::Mat;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HarteError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("factor T is not invertible")]
    TNotInvertible,
}

/// The six dimension quantities of a composition and the two sides of the
/// ghost identity. `holds` is a theorem in finite dimensions; a false value
/// indicates an implementation bug, never a property of the inputs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GhostReport {
    pub alpha_t: usize,
    pub alpha_s: usize,
    pub alpha_st: usize,
    pub beta_t: usize,
    pub beta_s: usize,
    pub beta_st: usize,
    pub lhs: usize,
    pub rhs: usize,
    pub holds: bool,
}

/// Evaluates the ghost identity for the composition `s · t` (apply `t`
/// first). Requires `cols(s) = rows(t)`.
pub fn ghost_identity(s: &Mat, t: &Mat) -> Result<GhostReport, HarteError> {
    if s.cols() != t.rows() {
        return Err(HarteError::ShapeMismatch(format!(
            "cannot compose: S is {}x{}, T is {}x{}",
            s.rows(),
            s.cols(),
            t.rows(),
            t.cols()
        )));
    }
    let st = s.mul(t);
    let (rank_t, rank_s, rank_st) = (t.rank(), s.rank(), st.rank());
    let alpha_t = t.cols() - rank_t;
    let alpha_s = s.cols() - rank_s;
    let alpha_st = st.cols() - rank_st;
    let beta_t = t.rows() - rank_t;
    let beta_s = s.rows() - rank_s;
    let beta_st = st.rows() - rank_st;
    let lhs = alpha_t + alpha_s + beta_st;
    let rhs = alpha_st + beta_t + beta_s;
    Ok(GhostReport {
        alpha_t,
        alpha_s,
        alpha_st,
        beta_t,
        beta_s,
        beta_st,
        lhs,
        rhs,
        holds: lhs == rhs,
    })
}

/// Kernel/range behavior of `s` under composition with an invertible `t`.
///
/// The first and third relations are dimension equalities only (the spaces
/// are isomorphic but generally different); the second and fourth are exact
/// subspace equalities. The distinction matters: composing with `t` on the
/// left moves the range, composing on the right moves nothing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorRelationsReport {
    /// rank(t·s) = rank(s), i.e. R(t·s) ≅ R(s).
    pub range_ts_dim_matches: bool,
    /// R(s·t) = R(s) as subspaces.
    pub range_st_equals: bool,
    /// nullity(s·t) = nullity(s), i.e. N(s·t) ≅ N(s).
    pub kernel_st_dim_matches: bool,
    /// N(t·s) = N(s) as subspaces.
    pub kernel_ts_equals: bool,
}

impl FactorRelationsReport {
    pub fn all_hold(&self) -> bool {
        self.range_ts_dim_matches
            && self.range_st_equals
            && self.kernel_st_dim_matches
            && self.kernel_ts_equals
    }
}

/// Checks the four kernel/range relations for square `s` and invertible
/// square `t` of the same size.
pub fn invertible_factor_relations(
    s: &Mat,
    t: &Mat,
) -> Result<FactorRelationsReport, HarteError> {
    if !t.is_square() || s.rows() != t.rows() || s.cols() != t.rows() {
        return Err(HarteError::ShapeMismatch(format!(
            "need square operators on one space: S is {}x{}, T is {}x{}",
            s.rows(),
            s.cols(),
            t.rows(),
            t.cols()
        )));
    }
    if !t.is_invertible() {
        return Err(HarteError::TNotInvertible);
    }
    let ts = t.mul(s);
    let st = s.mul(t);
    Ok(FactorRelationsReport {
        range_ts_dim_matches: ts.rank() == s.rank(),
        range_st_equals: crate::Space::image_of(&st) == crate::Space::image_of(s),
        kernel_st_dim_matches: st.nullity() == s.nullity(),
        kernel_ts_equals: crate::Space::kernel_of(&ts) == crate::Space::kernel_of(s),
    })
}

/// Ghost reports for the three named splittings of the five-factor
/// decomposition `[f1, f2, f3, f4, f5]` of an assembled completion:
///
/// 1. `(f1·f2, f3·f4·f5)`
/// 2. `(f1·f2·f3, f4·f5)`
/// 3. `(f2·f3, f4·f5)`
///
/// When the assembled matrix is invertible, these reports reproduce the
/// cokernel/kernel dimension relations that drive the necessity direction
/// of the 3×3 feasibility equivalence.
pub fn splitting_reports(factors: &[Mat; 5]) -> [GhostReport; 3] {
    let [f1, f2, f3, f4, f5] = factors;
    let f45 = f4.mul(f5);
    let first = ghost_identity(&f1.mul(f2), &f3.mul(&f45));
    let second = ghost_identity(&f1.mul(f2).mul(f3), &f45);
    let third = ghost_identity(&f2.mul(f3), &f45);
    [
        first.expect("factor shapes compose"),
        second.expect("factor shapes compose"),
        third.expect("factor shapes compose"),
    ]
}
