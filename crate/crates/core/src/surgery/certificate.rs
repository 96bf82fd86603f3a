//! Machine-checkable certificates that a minimal non-rational negative
//! definite tree is decomposed, by cuts and fillings, down to graphs needing
//! at most one bad vertex and to semidefinite pieces with at most one node.
//!
//! Every node records the graph it speaks about, how it was split, and a list
//! of claims. The checker ignores how the tree was produced: it rebuilds each
//! filling from the graph and edge, recomputes every claim, and compares
//! children up to isomorphism.

use std::collections::BTreeSet;
use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{cut_slope, fill_pair, SurgeryError};
use crate::exact::rat;
use crate::graph::{is_isomorphic, PlumbingGraph, VertexId};
use crate::lattice::{definiteness, determinant, Definiteness};
use crate::laufer::{is_bad_set, is_rational_fast, lower_bad_set};
use crate::seifert::{star_to_seifert, SeifertData};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Tag {
    /// At most one bad vertex; the witness is recorded.
    BaseM1,
    /// Cut at an edge `(v, w)` where `v` separates two node-carrying parts.
    Case1,
    /// Exactly two adjacent nodes: blow up the edge between them.
    Case2,
    /// Semidefinite piece with several nodes, cut further.
    SemidefCut,
    /// Semidefinite piece with at most one node.
    SemidefLeaf,
}

impl Tag {
    fn is_semidefinite(self) -> bool {
        matches!(self, Tag::SemidefCut | Tag::SemidefLeaf)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Subject {
    Graph,
    FilledV,
    FilledW,
    BlownUp,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClaimKind {
    Det,
    NegativeDefinite,
    NegativeSemidefinite,
    Rational,
    NodeCount,
    BadSet,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ClaimValue {
    Bool(bool),
    Number(#[serde(with = "crate::exact::as_str")] BigRational),
}

impl fmt::Display for ClaimValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClaimValue::Bool(b) => write!(f, "{b}"),
            ClaimValue::Number(n) => f.write_str(&crate::exact::format_rational(n)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Claim {
    pub kind: ClaimKind,
    pub subject: Subject,
    pub expected: ClaimValue,
    pub got: ClaimValue,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateTree {
    pub graph: PlumbingGraph,
    pub tag: Tag,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edge: Option<(VertexId, VertexId)>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "crate::exact::opt_as_str")]
    pub r: Option<BigRational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<VertexId>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seifert: Option<SeifertData>,
    pub claims: Vec<Claim>,
    #[serde(default)]
    pub children: Vec<CertificateTree>,
}

impl CertificateTree {
    /// Paths of all nodes in preorder; `[]` is the root.
    pub fn paths(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new()];
        for (i, c) in self.children.iter().enumerate() {
            for mut p in c.paths() {
                p.insert(0, i);
                out.push(p);
            }
        }
        out
    }

    pub fn get(&self, path: &[usize]) -> Option<&CertificateTree> {
        match path.split_first() {
            None => Some(self),
            Some((&i, rest)) => self.children.get(i)?.get(rest),
        }
    }

    pub fn get_mut(&mut self, path: &[usize]) -> Option<&mut CertificateTree> {
        match path.split_first() {
            None => Some(self),
            Some((&i, rest)) => self.children.get_mut(i)?.get_mut(rest),
        }
    }

    pub fn size(&self) -> usize {
        1 + self.children.iter().map(|c| c.size()).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self.children.iter().map(|c| c.depth()).max().unwrap_or(0)
    }
}

/// First failed check, with the path from the root to the offending node.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("certificate rejected at {path:?}: {reason}")]
pub struct CheckFailure {
    pub path: Vec<usize>,
    pub reason: String,
}

const BASE_CLAIMS: &[(ClaimKind, Subject)] = &[
    (ClaimKind::Det, Subject::Graph),
    (ClaimKind::NegativeDefinite, Subject::Graph),
    (ClaimKind::Rational, Subject::Graph),
    (ClaimKind::BadSet, Subject::Graph),
];
const CASE1_CLAIMS: &[(ClaimKind, Subject)] = &[
    (ClaimKind::Det, Subject::Graph),
    (ClaimKind::NegativeDefinite, Subject::Graph),
    (ClaimKind::Rational, Subject::Graph),
    (ClaimKind::NodeCount, Subject::Graph),
    (ClaimKind::Det, Subject::FilledW),
    (ClaimKind::NegativeSemidefinite, Subject::FilledW),
    (ClaimKind::Det, Subject::FilledV),
    (ClaimKind::NegativeDefinite, Subject::FilledV),
    (ClaimKind::Rational, Subject::FilledV),
    (ClaimKind::NodeCount, Subject::FilledV),
];
const CASE2_CLAIMS: &[(ClaimKind, Subject)] = &[
    (ClaimKind::Det, Subject::Graph),
    (ClaimKind::NegativeDefinite, Subject::Graph),
    (ClaimKind::Rational, Subject::Graph),
    (ClaimKind::NodeCount, Subject::Graph),
    (ClaimKind::Det, Subject::BlownUp),
    (ClaimKind::NegativeDefinite, Subject::BlownUp),
];
const CUT_CLAIMS: &[(ClaimKind, Subject)] = &[
    (ClaimKind::Det, Subject::Graph),
    (ClaimKind::NegativeSemidefinite, Subject::Graph),
    (ClaimKind::NodeCount, Subject::Graph),
    (ClaimKind::Det, Subject::FilledV),
    (ClaimKind::NegativeSemidefinite, Subject::FilledV),
    (ClaimKind::Det, Subject::FilledW),
    (ClaimKind::NegativeSemidefinite, Subject::FilledW),
];
const LEAF_CLAIMS: &[(ClaimKind, Subject)] = &[
    (ClaimKind::Det, Subject::Graph),
    (ClaimKind::NegativeSemidefinite, Subject::Graph),
    (ClaimKind::NodeCount, Subject::Graph),
];

fn required_claims(tag: Tag) -> &'static [(ClaimKind, Subject)] {
    match tag {
        Tag::BaseM1 => BASE_CLAIMS,
        Tag::Case1 => CASE1_CLAIMS,
        Tag::Case2 => CASE2_CLAIMS,
        Tag::SemidefCut => CUT_CLAIMS,
        Tag::SemidefLeaf => LEAF_CLAIMS,
    }
}

/// Graphs a node's claims refer to, rebuilt from its graph and edge.
struct Subjects {
    graph: PlumbingGraph,
    filled_v: Option<PlumbingGraph>,
    filled_w: Option<PlumbingGraph>,
    blown_up: Option<PlumbingGraph>,
    /// `det(Γ) / det(Γ_w \ w)`, the determinant a Case 1 filling must have.
    filled_v_det: Option<BigRational>,
    witness: BTreeSet<VertexId>,
}

impl Subjects {
    fn get(&self, s: Subject) -> Result<&PlumbingGraph, String> {
        let g = match s {
            Subject::Graph => Some(&self.graph),
            Subject::FilledV => self.filled_v.as_ref(),
            Subject::FilledW => self.filled_w.as_ref(),
            Subject::BlownUp => self.blown_up.as_ref(),
        };
        g.ok_or_else(|| format!("no {s:?} for this node"))
    }
}

fn is_strictly_semidefinite(g: &PlumbingGraph) -> bool {
    matches!(definiteness(g), Definiteness::NegativeSemidefinite { .. })
}

fn recompute(kind: ClaimKind, g: &PlumbingGraph, witness: &BTreeSet<VertexId>) -> Result<ClaimValue, String> {
    Ok(match kind {
        ClaimKind::Det => ClaimValue::Number(determinant(g)),
        ClaimKind::NegativeDefinite => ClaimValue::Bool(definiteness(g).is_negative_definite()),
        ClaimKind::NegativeSemidefinite => ClaimValue::Bool(is_strictly_semidefinite(g)),
        ClaimKind::Rational => ClaimValue::Bool(is_rational_fast(g).map_err(|e| e.to_string())?),
        ClaimKind::NodeCount => ClaimValue::Number(rat(g.nodes().len() as i64)),
        ClaimKind::BadSet => ClaimValue::Bool(is_bad_set(g, witness).map_err(|e| e.to_string())?),
    })
}

/// Value the theory demands, when it is fixed in advance.
fn requirement(tag: Tag, kind: ClaimKind, subject: Subject, s: &Subjects) -> Option<ClaimValue> {
    use ClaimKind::*;
    match kind {
        NegativeDefinite | NegativeSemidefinite | BadSet => Some(ClaimValue::Bool(true)),
        Rational => Some(ClaimValue::Bool(false)),
        Det => match (tag, subject) {
            (t, _) if t.is_semidefinite() => Some(ClaimValue::Number(BigRational::zero())),
            (Tag::Case1, Subject::FilledW) => Some(ClaimValue::Number(BigRational::zero())),
            (Tag::Case1, Subject::FilledV) => s.filled_v_det.clone().map(ClaimValue::Number),
            (Tag::Case2, Subject::BlownUp) => Some(ClaimValue::Number(determinant(&s.graph))),
            _ => None,
        },
        NodeCount => None,
    }
}

/// The claims a node with this tag must carry, recomputed from scratch.
fn derive_claims(tag: Tag, s: &Subjects) -> Result<Vec<Claim>, String> {
    required_claims(tag)
        .iter()
        .map(|&(kind, subject)| {
            let got = recompute(kind, s.get(subject)?, &s.witness)?;
            let expected = requirement(tag, kind, subject, s).unwrap_or_else(|| got.clone());
            Ok(Claim { kind, subject, expected, got })
        })
        .collect()
}

fn subjects_for(
    graph: &PlumbingGraph,
    tag: Tag,
    edge: Option<&(VertexId, VertexId)>,
    witness: Option<&[VertexId]>,
) -> Result<Subjects, String> {
    let mut s = Subjects {
        graph: graph.clone(),
        filled_v: None,
        filled_w: None,
        blown_up: None,
        filled_v_det: None,
        witness: witness.unwrap_or_default().iter().cloned().collect(),
    };
    match tag {
        Tag::Case1 | Tag::SemidefCut => {
            let (v, w) = edge.ok_or("missing edge")?;
            let cut = fill_pair(graph, v, w).map_err(|e| e.to_string())?;
            let minor = determinant(&cut.side_w.delete_vertex(w).map_err(|e| e.to_string())?);
            s.filled_v_det = Some(super::expanded_det(&(determinant(graph) / minor), &cut.r));
            s.filled_v = Some(cut.filled_v);
            s.filled_w = Some(cut.filled_w);
        }
        Tag::Case2 => {
            let (v, w) = edge.ok_or("missing edge")?;
            s.blown_up = Some(graph.blow_up_edge(v, w).map_err(|e| e.to_string())?.0);
        }
        Tag::BaseM1 | Tag::SemidefLeaf => {}
    }
    Ok(s)
}

fn make_node(
    graph: PlumbingGraph,
    tag: Tag,
    edge: Option<(VertexId, VertexId)>,
    witness: Option<Vec<VertexId>>,
    children: Vec<CertificateTree>,
) -> Result<CertificateTree, SurgeryError> {
    let s = subjects_for(&graph, tag, edge.as_ref(), witness.as_deref()).map_err(SurgeryError::Inconsistent)?;
    let claims = derive_claims(tag, &s).map_err(SurgeryError::Inconsistent)?;
    if let Some(c) = claims.iter().find(|c| c.expected != c.got) {
        return Err(SurgeryError::Inconsistent(format!(
            "{tag:?} claim {:?} on {:?}: expected {}, got {}",
            c.kind, c.subject, c.expected, c.got
        )));
    }
    let r = match (tag, &edge) {
        (Tag::Case1 | Tag::SemidefCut, Some((_, w))) => {
            let (_, side_w) = graph.split_edge(&edge.as_ref().unwrap().0, w)?;
            Some(cut_slope(&side_w, w)?)
        }
        _ => None,
    };
    let seifert = if tag == Tag::SemidefLeaf { star_to_seifert(&graph).ok() } else { None };
    Ok(CertificateTree { graph, tag, edge, r, witness, seifert, claims, children })
}

fn node_components(g: &PlumbingGraph, v: &VertexId, nodes: &BTreeSet<VertexId>) -> Result<Vec<PlumbingGraph>, SurgeryError> {
    Ok(g.delete_vertex(v)?.components().into_iter().filter(|c| c.vertices().any(|x| nodes.contains(x))).collect())
}

/// Case 1 pairs `(v, w)` in order: `v` separates at least two node-carrying
/// components, `w` is the neighbour of `v` in a node-carrying component other
/// than the first one on which `Γ↓` (lowering `v`) is non-rational.
fn case1_candidates(g: &PlumbingGraph, forced: Option<&VertexId>) -> Result<Vec<(VertexId, VertexId)>, SurgeryError> {
    let nodes = g.nodes();
    let vs: Vec<VertexId> = match forced {
        Some(v) => vec![v.clone()],
        None => g.vertices().cloned().collect(),
    };
    let mut out = Vec::new();
    for v in vs {
        if node_components(g, &v, &nodes)?.len() < 2 {
            continue;
        }
        let lowered = lower_bad_set(g, &BTreeSet::from([v.clone()]))?;
        let comps = g.delete_vertex(&v)?.components();
        let mut jump = None;
        for (i, c) in comps.iter().enumerate() {
            let mut keep: BTreeSet<VertexId> = c.vertices().cloned().collect();
            keep.insert(v.clone());
            if !is_rational_fast(&lowered.induced(&keep)?)? {
                jump = Some(i);
                break;
            }
        }
        let Some(i) = jump else { continue };
        for w in g.neighbors(&v)? {
            let ci = comps.iter().position(|c| c.contains(w)).unwrap();
            if ci != i && comps[ci].vertices().any(|x| nodes.contains(x)) {
                out.push((v.clone(), w.clone()));
            }
        }
    }
    Ok(out)
}

fn single_bad_vertex(g: &PlumbingGraph) -> Result<Option<VertexId>, SurgeryError> {
    for v in g.vertices() {
        if is_bad_set(g, &BTreeSet::from([v.clone()]))? {
            return Ok(Some(v.clone()));
        }
    }
    Ok(None)
}

fn base_leaf(g: &PlumbingGraph, witness: VertexId) -> Result<CertificateTree, SurgeryError> {
    make_node(g.clone(), Tag::BaseM1, None, Some(vec![witness]), Vec::new())
}

fn case1(g: &PlumbingGraph, forced: Option<&VertexId>) -> Result<CertificateTree, SurgeryError> {
    let graph_nodes = g.nodes().len();
    for (v, w) in case1_candidates(g, forced)? {
        let cut = fill_pair(g, &v, &w)?;
        let reduced = cut.filled_v.minimize();
        if !definiteness(&reduced).is_negative_definite() || is_rational_fast(&reduced)? {
            continue;
        }
        if cut.filled_v.nodes().len() >= graph_nodes {
            continue;
        }
        let first = build(&reduced)?;
        let second = semidef_decompose(&cut.filled_w)?;
        return make_node(g.clone(), Tag::Case1, Some((v, w)), None, vec![first, second]);
    }
    Err(SurgeryError::Inconsistent("no admissible Case 1 edge".into()))
}

fn build(g: &PlumbingGraph) -> Result<CertificateTree, SurgeryError> {
    if let Some(x) = single_bad_vertex(g)? {
        return base_leaf(g, x);
    }
    let nodes: Vec<VertexId> = g.nodes().into_iter().collect();
    let separating = g.vertices().any(|v| node_components(g, v, &g.nodes()).map(|c| c.len() >= 2).unwrap_or(false));
    if separating {
        return case1(g, None);
    }
    if nodes.len() != 2 || !g.has_edge(&nodes[0], &nodes[1]) {
        return Err(SurgeryError::Inconsistent(format!("{} nodes and no separating vertex", nodes.len())));
    }
    let (blown, u) = g.blow_up_edge(&nodes[0], &nodes[1])?;
    let child = if is_bad_set(&blown, &BTreeSet::from([u.clone()]))? {
        base_leaf(&blown, u)?
    } else {
        case1(&blown, Some(&u))?
    };
    make_node(g.clone(), Tag::Case2, Some((nodes[0].clone(), nodes[1].clone())), None, vec![child])
}

/// Certificate for a connected, integral, minimal, negative definite,
/// non-rational tree.
pub fn lo_certificate(g: &PlumbingGraph) -> Result<CertificateTree, SurgeryError> {
    if g.is_empty() || !g.is_connected() || !g.is_integral() || !definiteness(g).is_negative_definite() {
        return Err(SurgeryError::Precondition("graph must be connected, integral and negative definite".into()));
    }
    if !g.is_minimal() {
        return Err(SurgeryError::NotMinimal);
    }
    if is_rational_fast(g)? {
        return Err(SurgeryError::RationalInput);
    }
    build(g)
}

/// Splits a connected semidefinite tree with `det = 0` along the least edge
/// with nodes on both sides until every piece has at most one node.
pub fn semidef_decompose(g: &PlumbingGraph) -> Result<CertificateTree, SurgeryError> {
    if !g.is_connected() || !is_strictly_semidefinite(g) {
        return Err(SurgeryError::Precondition("graph must be connected, semidefinite and singular".into()));
    }
    let nodes = g.nodes();
    if nodes.len() <= 1 {
        return make_node(g.clone(), Tag::SemidefLeaf, None, None, Vec::new());
    }
    for (a, b) in g.edges() {
        let (side_a, side_b) = g.split_edge(&a, &b)?;
        let has_node = |side: &PlumbingGraph| side.vertices().any(|x| nodes.contains(x));
        if !has_node(&side_a) || !has_node(&side_b) {
            continue;
        }
        let cut = fill_pair(g, &a, &b)?;
        let children = vec![semidef_decompose(&cut.filled_v)?, semidef_decompose(&cut.filled_w)?];
        return make_node(g.clone(), Tag::SemidefCut, Some((a, b)), None, children);
    }
    Err(SurgeryError::Inconsistent("no edge separates two nodes".into()))
}

fn fail<T>(path: &[usize], reason: impl Into<String>) -> Result<T, CheckFailure> {
    Err(CheckFailure { path: path.to_vec(), reason: reason.into() })
}

fn check_child(
    path: &[usize],
    child: &CertificateTree,
    expected: &PlumbingGraph,
    allowed: &[Tag],
    what: &str,
) -> Result<(), CheckFailure> {
    if !allowed.contains(&child.tag) {
        return fail(path, format!("{what} child has tag {:?}", child.tag));
    }
    if is_isomorphic(&child.graph, expected).is_none() {
        return fail(path, format!("{what} child graph does not match"));
    }
    Ok(())
}

fn check_node(node: &CertificateTree, path: &mut Vec<usize>) -> Result<(), CheckFailure> {
    let g = &node.graph;
    if g.is_empty() || !g.is_connected() || !g.is_integral() {
        return fail(path, "graph must be non-empty, connected and integral");
    }
    let s = match subjects_for(g, node.tag, node.edge.as_ref(), node.witness.as_deref()) {
        Ok(s) => s,
        Err(e) => return fail(path, e),
    };
    let claims = match derive_claims(node.tag, &s) {
        Ok(c) => c,
        Err(e) => return fail(path, e),
    };
    for c in &claims {
        if c.expected != c.got {
            return fail(path, format!("{:?} of {:?} is {}, must be {}", c.kind, c.subject, c.got, c.expected));
        }
    }
    if node.claims != claims {
        return fail(path, "recorded claims differ from recomputed ones");
    }
    let slope = |path: &[usize]| -> Result<(), CheckFailure> {
        let (v, w) = node.edge.as_ref().unwrap();
        let side_w = match g.split_edge(v, w) {
            Ok((_, sw)) => sw,
            Err(e) => return fail(path, e.to_string()),
        };
        match cut_slope(&side_w, w) {
            Ok(r) if Some(&r) == node.r.as_ref() => Ok(()),
            Ok(_) => fail(path, "recorded slope is wrong"),
            Err(e) => fail(path, e.to_string()),
        }
    };
    let nodes = g.nodes();
    match node.tag {
        Tag::BaseM1 => {
            let ok_witness = node.witness.as_ref().is_some_and(|w| w.len() <= 1);
            if !ok_witness || node.edge.is_some() || node.r.is_some() || !node.children.is_empty() {
                return fail(path, "BaseM1 needs a witness of size at most one and nothing else");
            }
        }
        Tag::Case1 => {
            slope(path)?;
            let (v, w) = node.edge.as_ref().unwrap();
            let comps = g.delete_vertex(v).map_err(|e| CheckFailure { path: path.clone(), reason: e.to_string() })?.components();
            let with_nodes = |c: &PlumbingGraph| c.vertices().any(|x| nodes.contains(x));
            if comps.iter().filter(|c| with_nodes(c)).count() < 2 {
                return fail(path, "cut vertex does not separate two nodes");
            }
            if !comps.iter().any(|c| c.contains(w) && with_nodes(c)) {
                return fail(path, "far side of the cut carries no node");
            }
            let filled_v = s.filled_v.as_ref().unwrap();
            if filled_v.nodes().len() >= nodes.len() {
                return fail(path, "node count does not drop");
            }
            if node.children.len() != 2 || node.witness.is_some() {
                return fail(path, "Case1 needs exactly two children");
            }
            check_child(path, &node.children[0], &filled_v.minimize(), &[Tag::BaseM1, Tag::Case1, Tag::Case2], "definite")?;
            check_child(path, &node.children[1], s.filled_w.as_ref().unwrap(), &[Tag::SemidefCut, Tag::SemidefLeaf], "semidefinite")?;
        }
        Tag::Case2 => {
            let (v, w) = node.edge.as_ref().unwrap();
            if nodes.len() != 2 || !nodes.contains(v) || !nodes.contains(w) {
                return fail(path, "Case2 edge must join the only two nodes");
            }
            if node.children.len() != 1 || node.r.is_some() || node.witness.is_some() {
                return fail(path, "Case2 needs exactly one child");
            }
            check_child(path, &node.children[0], s.blown_up.as_ref().unwrap(), &[Tag::BaseM1, Tag::Case1], "blown-up")?;
        }
        Tag::SemidefCut => {
            slope(path)?;
            let (v, w) = node.edge.as_ref().unwrap();
            let (side_v, side_w) = g.split_edge(v, w).map_err(|e| CheckFailure { path: path.clone(), reason: e.to_string() })?;
            let with_nodes = |c: &PlumbingGraph| c.vertices().any(|x| nodes.contains(x));
            if !with_nodes(&side_v) || !with_nodes(&side_w) {
                return fail(path, "semidefinite cut must separate nodes");
            }
            if node.children.len() != 2 || node.witness.is_some() {
                return fail(path, "SemidefCut needs exactly two children");
            }
            let tags = [Tag::SemidefCut, Tag::SemidefLeaf];
            check_child(path, &node.children[0], s.filled_v.as_ref().unwrap(), &tags, "first")?;
            check_child(path, &node.children[1], s.filled_w.as_ref().unwrap(), &tags, "second")?;
        }
        Tag::SemidefLeaf => {
            if nodes.len() > 1 || !node.children.is_empty() || node.edge.is_some() || node.r.is_some() || node.witness.is_some() {
                return fail(path, "SemidefLeaf must have at most one node and no children");
            }
            if node.seifert != star_to_seifert(g).ok() {
                return fail(path, "recorded Seifert data is wrong");
            }
        }
    }
    if !node.tag.is_semidefinite() && node.seifert.is_some() {
        return fail(path, "only semidefinite leaves carry Seifert data");
    }
    for (i, child) in node.children.iter().enumerate() {
        path.push(i);
        check_node(child, path)?;
        path.pop();
    }
    Ok(())
}

/// Verifies a certificate from scratch.
pub fn check_certificate(cert: &CertificateTree) -> Result<(), CheckFailure> {
    check_node(cert, &mut Vec::new())
}
