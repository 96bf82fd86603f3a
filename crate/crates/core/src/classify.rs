//! The user-facing report: rationality decides the L-space, left-orderability
//! and taut foliation questions for links of negative definite trees.

use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{PlumbingGraph, VertexId};
use crate::lattice::{definiteness, determinant};
use crate::laufer::{is_bad_set, is_rational, min_bad, LauferError};

/// Exact bad-set search is exponential; above this many vertices the node
/// set is reported as an upper bound.
pub const DEFAULT_BAD_SET_CAP: usize = 14;

#[derive(Debug, Error)]
pub enum ClassifyError {
    #[error("input must be a non-empty connected tree")]
    NotConnected,
    #[error("weight of `{0}` is not an integer")]
    NonIntegral(VertexId),
    #[error(transparent)]
    Laufer(#[from] LauferError),
}

impl ClassifyError {
    /// Whether the failure is an internal cross-check rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            ClassifyError::Laufer(LauferError::CriteriaDisagree | LauferError::Diverged | LauferError::LoweringCap(_))
        )
    }
}

#[derive(Clone, Debug)]
pub struct ClassifyOptions {
    pub with_bad_set: bool,
    pub bad_set_cap: usize,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions { with_bad_set: false, bad_set_cap: DEFAULT_BAD_SET_CAP }
    }
}

/// Topology fields are `None` when the form is not negative definite: the
/// equivalences only speak about negative definite graphs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub input: PlumbingGraph,
    pub vertices: usize,
    pub negative_definite: bool,
    pub definiteness: String,
    #[serde(with = "crate::exact::as_str")]
    pub det: BigRational,
    pub zhs: bool,
    pub rational: Option<bool>,
    pub l_space: Option<bool>,
    pub lo: Option<bool>,
    pub taut_foliation: Option<bool>,
    pub m: Option<usize>,
    pub bad_set: Option<Vec<VertexId>>,
    /// Set when `m` is only the size of a known bad set, not the minimum.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub m_upper_bound: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate_path: Option<String>,
}

impl ClassificationReport {
    /// The three equivalences, as they must hold on every report.
    pub fn is_consistent(&self) -> bool {
        let Some(r) = self.rational else {
            return !self.negative_definite && self.l_space.is_none() && self.lo.is_none() && self.taut_foliation.is_none();
        };
        self.negative_definite
            && self.l_space == Some(r)
            && self.lo == Some(!r)
            && self.taut_foliation == Some(!r)
            && (!r || self.m.map_or(true, |m| m == 0))
    }
}

pub fn classify(g: &PlumbingGraph, opts: &ClassifyOptions) -> Result<ClassificationReport, ClassifyError> {
    if g.is_empty() || !g.is_connected() {
        return Err(ClassifyError::NotConnected);
    }
    if let Some((v, _)) = g.weights().find(|(_, w)| !w.is_integer()) {
        return Err(ClassifyError::NonIntegral(v.clone()));
    }
    let det = determinant(g);
    let form = definiteness(g);
    let nd = form.is_negative_definite();
    let mut report = ClassificationReport {
        input: g.clone(),
        vertices: g.len(),
        negative_definite: nd,
        definiteness: form.to_string(),
        zhs: det.abs().is_one(),
        det,
        rational: None,
        l_space: None,
        lo: None,
        taut_foliation: None,
        m: None,
        bad_set: None,
        m_upper_bound: false,
        certificate_path: None,
    };
    if !nd {
        return Ok(report);
    }
    let rational = is_rational(g)?.rational;
    report.rational = Some(rational);
    report.l_space = Some(rational);
    report.lo = Some(!rational);
    report.taut_foliation = Some(!rational);
    if opts.with_bad_set {
        if rational {
            report.m = Some(0);
            report.bad_set = Some(Vec::new());
        } else if g.len() <= opts.bad_set_cap {
            let search = min_bad(g)?;
            report.m = Some(search.m);
            report.bad_set = Some(search.witness.into_iter().collect());
        } else {
            let nodes = g.nodes();
            let bound: BTreeSet<VertexId> = if is_bad_set(g, &nodes)? { nodes } else { g.vertices().cloned().collect() };
            report.m = Some(bound.len());
            report.bad_set = Some(bound.into_iter().collect());
            report.m_upper_bound = true;
        }
    }
    Ok(report)
}
