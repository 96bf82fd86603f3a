//! Cutting a plumbing tree along an edge and filling each side with a
//! string, plus certificates for the resulting recursive decomposition.

pub mod certificate;
pub mod cf;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{GraphError, PlumbingGraph, VertexId};
use crate::lattice::{definiteness, determinant, Definiteness};
use crate::laufer::LauferError;

pub use certificate::{check_certificate, lo_certificate, semidef_decompose, CertificateTree, CheckFailure};
pub use cf::{attach_string, evaluate, negative_cf, ContinuedFraction};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SurgeryError {
    #[error("slope {0} is not negative")]
    NonNegativeSlope(BigRational),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("graph is rational; no certificate exists")]
    RationalInput,
    #[error("graph is not minimal")]
    NotMinimal,
    #[error("internal cross-check failed: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Laufer(#[from] LauferError),
}

/// Result of cutting `Γ` along `e = (v, w)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutResult {
    pub edge: (VertexId, VertexId),
    /// `Γ_v`, the side of `Γ \ e` containing `v`.
    pub side_v: PlumbingGraph,
    pub side_w: PlumbingGraph,
    /// `r = -det(Γ_w \ w) / det(Γ_w)`.
    #[serde(with = "crate::exact::as_str")]
    pub r: BigRational,
    /// `Γ_v` with the string for `1/r` attached at `v`.
    pub filled_v: PlumbingGraph,
    /// `Γ_w` with the string for `r` attached at `w`.
    pub filled_w: PlumbingGraph,
    pub string_v: Vec<VertexId>,
    pub string_w: Vec<VertexId>,
    /// `Γ_v` plus one vertex decorated by `1/r`, before string expansion.
    pub rational_v: PlumbingGraph,
    /// `Γ_w` plus one vertex decorated by `r`.
    pub rational_w: PlumbingGraph,
}

/// Hangs one new vertex of rational weight `weight` off `at`.
fn attach_rational(g: &PlumbingGraph, at: &VertexId, weight: &BigRational, avoid: &[&PlumbingGraph]) -> Result<PlumbingGraph, SurgeryError> {
    let mut taken = vec![g];
    taken.extend_from_slice(avoid);
    let id = cf::fresh_ids(1, &taken).remove(0);
    let mut out = g.clone();
    out.add_vertex(id.clone(), weight.clone())?;
    out.add_edge(at, &id)?;
    Ok(out)
}

/// Slope of the `w` side: `-det(Γ_w \ w) / det(Γ_w)`.
pub fn cut_slope(side_w: &PlumbingGraph, w: &VertexId) -> Result<BigRational, SurgeryError> {
    let d = determinant(side_w);
    if d.is_zero() {
        return Err(SurgeryError::Precondition(format!("side of `{w}` is singular")));
    }
    Ok(-determinant(&side_w.delete_vertex(w)?) / d)
}

/// `det` of `Γ_v(1/r)` after string expansion, given its value before.
pub fn expanded_det(rational_det: &BigRational, r: &BigRational) -> BigRational {
    rational_det * BigRational::from_integer(r.recip().denom().clone())
}

/// Builds both fillings without checking any claim about them. New ids avoid
/// every id of `g`.
pub fn fill_pair(g: &PlumbingGraph, v: &VertexId, w: &VertexId) -> Result<CutResult, SurgeryError> {
    if !g.has_edge(v, w) {
        return Err(GraphError::EdgeAbsent(v.clone(), w.clone()).into());
    }
    let (side_v, side_w) = g.split_edge(v, w)?;
    let r = cut_slope(&side_w, w)?;
    if !r.is_negative() {
        return Err(SurgeryError::Precondition(format!("slope {r} at `{w}` is not negative")));
    }
    let (filled_w, string_w) = cf::attach_string_avoiding(&side_w, w, &r, &[g])?;
    let (filled_v, string_v) = cf::attach_string_avoiding(&side_v, v, &r.recip(), &[g, &filled_w])?;
    let rational_w = attach_rational(&side_w, w, &r, &[g])?;
    let rational_v = attach_rational(&side_v, v, &r.recip(), &[g])?;
    Ok(CutResult {
        edge: (v.clone(), w.clone()),
        side_v,
        side_w,
        r,
        filled_v,
        filled_w,
        string_v,
        string_w,
        rational_v,
        rational_w,
    })
}

/// Cut-and-fill on a connected negative definite tree. Verifies that
/// `det(filled_w) = 0` with `filled_w` semidefinite, that `filled_v` is
/// negative definite, and that `det(Γ_v(1/r)) = det(Γ) / det(Γ_w \ w)` for
/// the single rational vertex. Expanding that vertex into its string
/// multiplies the determinant by the denominator of `1/r`, which is checked
/// on `filled_v`.
pub fn cut_and_fill(g: &PlumbingGraph, v: &VertexId, w: &VertexId) -> Result<CutResult, SurgeryError> {
    if !g.is_connected() || !definiteness(g).is_negative_definite() {
        return Err(SurgeryError::Precondition("graph must be connected and negative definite".into()));
    }
    let cut = fill_pair(g, v, w)?;
    if !determinant(&cut.filled_w).is_zero() {
        return Err(SurgeryError::Inconsistent("det(filled_w) is not zero".into()));
    }
    if !matches!(definiteness(&cut.filled_w), Definiteness::NegativeSemidefinite { .. }) {
        return Err(SurgeryError::Inconsistent("filled_w is not negative semidefinite".into()));
    }
    if !definiteness(&cut.filled_v).is_negative_definite() {
        return Err(SurgeryError::Inconsistent("filled_v is not negative definite".into()));
    }
    if !determinant(&cut.rational_w).is_zero() {
        return Err(SurgeryError::Inconsistent("det(Γ_w(r)) is not zero".into()));
    }
    if !definiteness(&cut.rational_v).is_negative_definite() {
        return Err(SurgeryError::Inconsistent("Γ_v(1/r) is not negative definite".into()));
    }
    let expected = determinant(g) / determinant(&cut.side_w.delete_vertex(w)?);
    if determinant(&cut.rational_v) != expected {
        return Err(SurgeryError::Inconsistent("det(Γ_v(1/r)) mismatch".into()));
    }
    if determinant(&cut.filled_v) != expanded_det(&expected, &cut.r) {
        return Err(SurgeryError::Inconsistent("det(filled_v) mismatch".into()));
    }
    Ok(cut)
}
