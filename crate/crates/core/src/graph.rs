//! Plumbing graphs: decorated forests of spheres with Euler weights.
//!
//! A [`PlumbingGraph`] is a value type. Every move (blow-up, blow-down,
//! deletion) returns a fresh graph and keeps the identifiers of the surviving
//! vertices unchanged, so later stages can refer to vertices by id.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::exact::{format_rational, parse_rational};

/// Prefix used for vertices created by graph moves.
pub const FRESH_PREFIX: &str = "_";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: duplicate vertex `{id}`")]
    DuplicateVertex { line: usize, id: String },
    #[error("line {line}: edge refers to undeclared vertex `{id}`")]
    UndeclaredVertex { line: usize, id: String },
    #[error("line {line}: loop at vertex `{id}`")]
    Loop { line: usize, id: String },
    #[error("line {line}: repeated edge `{a}`-`{b}`")]
    MultiEdge { line: usize, a: String, b: String },
    #[error("line {line}: edge `{a}`-`{b}` closes a cycle")]
    Cycle { line: usize, a: String, b: String },
    #[error("invalid vertex id `{0}`")]
    InvalidId(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(VertexId),
    #[error("no edge between `{0}` and `{1}`")]
    EdgeAbsent(VertexId, VertexId),
    #[error("cannot blow down `{id}`: {reason}")]
    BlowDown { id: VertexId, reason: String },
}

/// Stable vertex identifier, `[A-Za-z0-9_]+`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexId(String);

impl VertexId {
    pub fn new(id: impl Into<String>) -> Result<Self, GraphError> {
        let id = id.into();
        if id.is_empty() || !id.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Err(GraphError::InvalidId(id));
        }
        Ok(VertexId(id))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn is_fresh(&self) -> bool {
        self.0.starts_with(FRESH_PREFIX)
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for VertexId {
    type Err = GraphError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        VertexId::new(s)
    }
}

impl Serialize for VertexId {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for VertexId {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        VertexId::new(s).map_err(serde::de::Error::custom)
    }
}

/// Shorthand for building ids in code and tests. Panics on an invalid id.
pub fn vid(id: &str) -> VertexId {
    VertexId::new(id).expect("valid vertex id")
}

/// A plumbing forest with rational Euler weights and zero genus.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PlumbingGraph {
    weights: BTreeMap<VertexId, BigRational>,
    adj: BTreeMap<VertexId, BTreeSet<VertexId>>,
}

/// Dense view with vertices indexed `0..n` in id order.
#[derive(Clone, Debug)]
pub struct Indexed {
    pub ids: Vec<VertexId>,
    pub weights: Vec<BigRational>,
    pub adj: Vec<Vec<usize>>,
}

impl Indexed {
    pub fn index_of(&self, id: &VertexId) -> Option<usize> {
        self.ids.binary_search(id).ok()
    }
}

impl PlumbingGraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a graph from integer weights and edges; panics on invalid input.
    /// Intended for fixtures.
    pub fn from_parts(vertices: &[(&str, i64)], edges: &[(&str, &str)]) -> Self {
        let mut g = PlumbingGraph::new();
        for (id, w) in vertices {
            g.add_vertex(vid(id), BigRational::from_integer(BigInt::from(*w)))
                .expect("fixture vertex");
        }
        for (a, b) in edges {
            g.add_edge(&vid(a), &vid(b)).expect("fixture edge");
        }
        g
    }

    pub fn add_vertex(&mut self, id: VertexId, weight: BigRational) -> Result<(), GraphError> {
        if self.weights.contains_key(&id) {
            return Err(GraphError::DuplicateVertex { line: 0, id: id.0 });
        }
        self.adj.insert(id.clone(), BTreeSet::new());
        self.weights.insert(id, weight);
        Ok(())
    }

    /// Adds an edge, refusing loops, repeated edges and cycles.
    pub fn add_edge(&mut self, a: &VertexId, b: &VertexId) -> Result<(), GraphError> {
        for id in [a, b] {
            if !self.contains(id) {
                return Err(GraphError::UndeclaredVertex { line: 0, id: id.0.clone() });
            }
        }
        if a == b {
            return Err(GraphError::Loop { line: 0, id: a.0.clone() });
        }
        if self.adj[a].contains(b) {
            return Err(GraphError::MultiEdge { line: 0, a: a.0.clone(), b: b.0.clone() });
        }
        if self.component_of(a).contains(b) {
            return Err(GraphError::Cycle { line: 0, a: a.0.clone(), b: b.0.clone() });
        }
        self.adj.get_mut(a).unwrap().insert(b.clone());
        self.adj.get_mut(b).unwrap().insert(a.clone());
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn contains(&self, id: &VertexId) -> bool {
        self.weights.contains_key(id)
    }

    pub fn vertices(&self) -> impl Iterator<Item = &VertexId> {
        self.weights.keys()
    }

    pub fn weights(&self) -> impl Iterator<Item = (&VertexId, &BigRational)> {
        self.weights.iter()
    }

    pub fn weight(&self, id: &VertexId) -> Result<&BigRational, GraphError> {
        self.weights.get(id).ok_or_else(|| GraphError::UnknownVertex(id.clone()))
    }

    /// Integer weight, if the decoration is integral and fits in `i64`.
    pub fn integer_weight(&self, id: &VertexId) -> Option<i64> {
        let w = self.weights.get(id)?;
        if w.is_integer() {
            w.to_integer().to_i64()
        } else {
            None
        }
    }

    pub fn is_integral(&self) -> bool {
        self.weights.values().all(|w| w.is_integer())
    }

    pub fn neighbors(&self, id: &VertexId) -> Result<&BTreeSet<VertexId>, GraphError> {
        self.adj.get(id).ok_or_else(|| GraphError::UnknownVertex(id.clone()))
    }

    pub fn valency(&self, id: &VertexId) -> Result<usize, GraphError> {
        Ok(self.neighbors(id)?.len())
    }

    pub fn has_edge(&self, a: &VertexId, b: &VertexId) -> bool {
        self.adj.get(a).is_some_and(|n| n.contains(b))
    }

    /// Edges as ordered pairs `(a, b)` with `a < b`, sorted.
    pub fn edges(&self) -> Vec<(VertexId, VertexId)> {
        let mut out = Vec::new();
        for (a, ns) in &self.adj {
            for b in ns {
                if a < b {
                    out.push((a.clone(), b.clone()));
                }
            }
        }
        out
    }

    /// Vertices of valency at least three.
    pub fn nodes(&self) -> BTreeSet<VertexId> {
        self.adj
            .iter()
            .filter(|(_, ns)| ns.len() >= 3)
            .map(|(v, _)| v.clone())
            .collect()
    }

    pub fn with_weight(&self, id: &VertexId, weight: BigRational) -> Result<Self, GraphError> {
        let mut g = self.clone();
        *g.weights
            .get_mut(id)
            .ok_or_else(|| GraphError::UnknownVertex(id.clone()))? = weight;
        Ok(g)
    }

    /// A new identifier `_<k>` not used in this graph.
    pub fn fresh_id(&self) -> VertexId {
        let mut k = self.len();
        loop {
            let id = VertexId(format!("{FRESH_PREFIX}{k}"));
            if !self.contains(&id) {
                return id;
            }
            k += 1;
        }
    }

    pub fn indexed(&self) -> Indexed {
        let ids: Vec<VertexId> = self.weights.keys().cloned().collect();
        let weights = self.weights.values().cloned().collect();
        let adj = self
            .adj
            .values()
            .map(|ns| ns.iter().map(|n| ids.binary_search(n).unwrap()).collect())
            .collect();
        Indexed { ids, weights, adj }
    }

    fn component_of(&self, start: &VertexId) -> BTreeSet<VertexId> {
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::from([start.clone()]);
        seen.insert(start.clone());
        while let Some(v) = queue.pop_front() {
            for n in &self.adj[&v] {
                if seen.insert(n.clone()) {
                    queue.push_back(n.clone());
                }
            }
        }
        seen
    }

    pub fn is_connected(&self) -> bool {
        match self.weights.keys().next() {
            None => true,
            Some(first) => self.component_of(first).len() == self.len(),
        }
    }

    /// The induced subgraph on `keep`.
    pub fn induced(&self, keep: &BTreeSet<VertexId>) -> Result<Self, GraphError> {
        for id in keep {
            if !self.contains(id) {
                return Err(GraphError::UnknownVertex(id.clone()));
            }
        }
        let weights = keep.iter().map(|id| (id.clone(), self.weights[id].clone())).collect();
        let adj = keep
            .iter()
            .map(|id| {
                let ns = self.adj[id].iter().filter(|n| keep.contains(*n)).cloned().collect();
                (id.clone(), ns)
            })
            .collect();
        Ok(PlumbingGraph { weights, adj })
    }

    /// Removes the given vertices together with their edges.
    pub fn delete_vertices(&self, remove: &BTreeSet<VertexId>) -> Result<Self, GraphError> {
        for id in remove {
            if !self.contains(id) {
                return Err(GraphError::UnknownVertex(id.clone()));
            }
        }
        let keep = self.weights.keys().filter(|v| !remove.contains(*v)).cloned().collect();
        self.induced(&keep)
    }

    pub fn delete_vertex(&self, id: &VertexId) -> Result<Self, GraphError> {
        self.delete_vertices(&BTreeSet::from([id.clone()]))
    }

    /// Removes the given edges, keeping every vertex.
    pub fn delete_edges(&self, remove: &[(VertexId, VertexId)]) -> Result<Self, GraphError> {
        let mut g = self.clone();
        for (a, b) in remove {
            if !g.has_edge(a, b) {
                return Err(GraphError::EdgeAbsent(a.clone(), b.clone()));
            }
            g.adj.get_mut(a).unwrap().remove(b);
            g.adj.get_mut(b).unwrap().remove(a);
        }
        Ok(g)
    }

    /// Connected components, ordered by their smallest vertex id.
    pub fn components(&self) -> Vec<PlumbingGraph> {
        let mut seen: BTreeSet<VertexId> = BTreeSet::new();
        let mut out = Vec::new();
        for v in self.weights.keys() {
            if seen.contains(v) {
                continue;
            }
            let comp = self.component_of(v);
            seen.extend(comp.iter().cloned());
            out.push(self.induced(&comp).unwrap());
        }
        out
    }

    /// The component containing `id`.
    pub fn component_containing(&self, id: &VertexId) -> Result<Self, GraphError> {
        if !self.contains(id) {
            return Err(GraphError::UnknownVertex(id.clone()));
        }
        self.induced(&self.component_of(id))
    }

    /// Splits along the edge `(v, w)`: returns `(Γ_v, Γ_w)`, the components of
    /// `Γ \ e` containing `v` and `w`.
    pub fn split_edge(&self, v: &VertexId, w: &VertexId) -> Result<(Self, Self), GraphError> {
        let cut = self.delete_edges(&[(v.clone(), w.clone())])?;
        Ok((cut.component_containing(v)?, cut.component_containing(w)?))
    }

    /// Disjoint union; ids must not collide.
    pub fn disjoint_union(&self, other: &Self) -> Result<Self, GraphError> {
        let mut g = self.clone();
        for (id, w) in &other.weights {
            g.add_vertex(id.clone(), w.clone())?;
        }
        for (a, b) in other.edges() {
            g.add_edge(&a, &b)?;
        }
        Ok(g)
    }

    /// Subdivides the edge `(v, w)` by a new `(-1)` vertex and lowers both
    /// endpoint weights by one. Returns the graph and the new vertex.
    pub fn blow_up_edge(&self, v: &VertexId, w: &VertexId) -> Result<(Self, VertexId), GraphError> {
        if !self.has_edge(v, w) {
            return Err(GraphError::EdgeAbsent(v.clone(), w.clone()));
        }
        let mut g = self.delete_edges(&[(v.clone(), w.clone())])?;
        let u = self.fresh_id();
        g.add_vertex(u.clone(), -BigRational::one())?;
        g.add_edge(v, &u)?;
        g.add_edge(&u, w)?;
        for x in [v, w] {
            *g.weights.get_mut(x).unwrap() -= BigRational::one();
        }
        Ok((g, u))
    }

    /// Whether `id` is a `(-1)` vertex of valency at most two.
    pub fn is_blow_down_candidate(&self, id: &VertexId) -> bool {
        let minus_one = -BigRational::one();
        self.weights.get(id) == Some(&minus_one) && self.adj[id].len() <= 2
    }

    pub fn blow_down_candidates(&self) -> Vec<VertexId> {
        self.weights.keys().filter(|v| self.is_blow_down_candidate(v)).cloned().collect()
    }

    /// Contracts a `(-1)` vertex of valency at most two.
    pub fn blow_down(&self, id: &VertexId) -> Result<Self, GraphError> {
        let weight = self.weight(id)?;
        if *weight != -BigRational::one() {
            return Err(GraphError::BlowDown {
                id: id.clone(),
                reason: format!("weight is {}, not -1", format_rational(weight)),
            });
        }
        let ns: Vec<VertexId> = self.adj[id].iter().cloned().collect();
        if ns.len() > 2 {
            return Err(GraphError::BlowDown {
                id: id.clone(),
                reason: format!("valency {} exceeds 2", ns.len()),
            });
        }
        let mut g = self.delete_vertex(id)?;
        for n in &ns {
            *g.weights.get_mut(n).unwrap() += BigRational::one();
        }
        if let [a, b] = ns.as_slice() {
            g.add_edge(a, b)?;
        }
        Ok(g)
    }

    /// Whether no `(-1)` vertex of valency at most two remains. The single
    /// `(-1)` vertex counts as minimal.
    pub fn is_minimal(&self) -> bool {
        self.len() <= 1 || self.blow_down_candidates().is_empty()
    }

    /// Blows down until minimal, always contracting the smallest candidate id.
    /// The last vertex is never removed.
    pub fn minimize(&self) -> Self {
        self.minimize_by(|c| c[0].clone())
    }

    /// Like [`minimize`](Self::minimize) with a caller-chosen contraction order.
    pub fn minimize_by(&self, mut choose: impl FnMut(&[VertexId]) -> VertexId) -> Self {
        let mut g = self.clone();
        while g.len() > 1 {
            let candidates = g.blow_down_candidates();
            if candidates.is_empty() {
                break;
            }
            let pick = choose(&candidates);
            g = g.blow_down(&pick).expect("candidate is contractible");
        }
        g
    }

    /// Canonical text form: vertices sorted by id, then sorted edges.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (id, w) in &self.weights {
            out.push_str(&format!("vertex {id} {}\n", format_rational(w)));
        }
        for (a, b) in self.edges() {
            out.push_str(&format!("edge {a} {b}\n"));
        }
        out
    }

    /// Parses the line format `vertex <id> <weight>` / `edge <id> <id>` with
    /// `#` comments. Edges may precede the declarations they use.
    pub fn parse(text: &str) -> Result<Self, GraphError> {
        let mut g = PlumbingGraph::new();
        let mut edges = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = n + 1;
            let content = raw.split('#').next().unwrap_or("");
            let tokens: Vec<&str> = content.split_whitespace().collect();
            let syntax = |message: String| GraphError::Syntax { line, message };
            match tokens.as_slice() {
                [] => {}
                ["vertex", id, weight] => {
                    let id = VertexId::new(*id).map_err(|e| syntax(e.to_string()))?;
                    let weight = parse_rational(weight)
                        .ok_or_else(|| syntax(format!("bad weight `{weight}`")))?;
                    g.add_vertex(id, weight).map_err(|e| with_line(e, line))?;
                }
                ["edge", a, b] => {
                    let a = VertexId::new(*a).map_err(|e| syntax(e.to_string()))?;
                    let b = VertexId::new(*b).map_err(|e| syntax(e.to_string()))?;
                    edges.push((line, a, b));
                }
                [kw, ..] if *kw == "vertex" || *kw == "edge" => {
                    return Err(syntax(format!("wrong number of fields for `{kw}`")));
                }
                [kw, ..] => return Err(syntax(format!("unknown statement `{kw}`"))),
            }
        }
        for (line, a, b) in edges {
            g.add_edge(&a, &b).map_err(|e| with_line(e, line))?;
        }
        Ok(g)
    }
}

fn with_line(err: GraphError, line: usize) -> GraphError {
    match err {
        GraphError::DuplicateVertex { id, .. } => GraphError::DuplicateVertex { line, id },
        GraphError::UndeclaredVertex { id, .. } => GraphError::UndeclaredVertex { line, id },
        GraphError::Loop { id, .. } => GraphError::Loop { line, id },
        GraphError::MultiEdge { a, b, .. } => GraphError::MultiEdge { line, a, b },
        GraphError::Cycle { a, b, .. } => GraphError::Cycle { line, a, b },
        other => other,
    }
}

impl FromStr for PlumbingGraph {
    type Err = GraphError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PlumbingGraph::parse(s)
    }
}

impl fmt::Display for PlumbingGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl Serialize for PlumbingGraph {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_text())
    }
}

impl<'de> Deserialize<'de> for PlumbingGraph {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        PlumbingGraph::parse(&s).map_err(serde::de::Error::custom)
    }
}

// ---------------------------------------------------------------------------
// Isomorphism of decorated forests via centroid-rooted canonical codes.

fn rooted_code(g: &PlumbingGraph, root: &VertexId, parent: Option<&VertexId>) -> String {
    let mut child_codes: Vec<String> = g.adj[root]
        .iter()
        .filter(|n| Some(*n) != parent)
        .map(|n| rooted_code(g, n, Some(root)))
        .collect();
    child_codes.sort();
    format!("({}{})", format_rational(&g.weights[root]), child_codes.concat())
}

fn centroids(tree: &PlumbingGraph) -> Vec<VertexId> {
    let n = tree.len();
    let idx = tree.indexed();
    let root = 0;
    let mut order = vec![root];
    let mut parent = vec![usize::MAX; n];
    let mut i = 0;
    while i < order.len() {
        let v = order[i];
        for &c in &idx.adj[v] {
            if c != parent[v] {
                parent[c] = v;
                order.push(c);
            }
        }
        i += 1;
    }
    let mut size = vec![1usize; n];
    for &v in order.iter().rev() {
        if parent[v] != usize::MAX {
            size[parent[v]] += size[v];
        }
    }
    let mut out = Vec::new();
    for v in 0..n {
        let mut heaviest = n - size[v];
        for &c in &idx.adj[v] {
            if c != parent[v] {
                heaviest = heaviest.max(size[c]);
            }
        }
        if 2 * heaviest <= n {
            out.push(idx.ids[v].clone());
        }
    }
    out
}

/// Canonical code and the root it was taken at, for a non-empty tree.
fn tree_code(tree: &PlumbingGraph) -> (String, VertexId) {
    centroids(tree)
        .into_iter()
        .map(|c| (rooted_code(tree, &c, None), c))
        .min()
        .expect("non-empty tree has a centroid")
}

/// Canonical form of a decorated forest, equal exactly for isomorphic inputs.
pub fn canonical_code(g: &PlumbingGraph) -> String {
    let mut codes: Vec<String> = g.components().iter().map(|c| tree_code(c).0).collect();
    codes.sort();
    codes.join("+")
}

fn match_rooted(
    g1: &PlumbingGraph,
    r1: &VertexId,
    p1: Option<&VertexId>,
    g2: &PlumbingGraph,
    r2: &VertexId,
    p2: Option<&VertexId>,
    map: &mut BTreeMap<VertexId, VertexId>,
) {
    map.insert(r1.clone(), r2.clone());
    let mut c1: Vec<(String, &VertexId)> = g1.adj[r1]
        .iter()
        .filter(|n| Some(*n) != p1)
        .map(|n| (rooted_code(g1, n, Some(r1)), n))
        .collect();
    let mut c2: Vec<(String, &VertexId)> = g2.adj[r2]
        .iter()
        .filter(|n| Some(*n) != p2)
        .map(|n| (rooted_code(g2, n, Some(r2)), n))
        .collect();
    c1.sort();
    c2.sort();
    for ((_, a), (_, b)) in c1.into_iter().zip(c2) {
        match_rooted(g1, a, Some(r1), g2, b, Some(r2), map);
    }
}

/// Decorated-forest isomorphism. Returns a witness map from `g1` to `g2`.
pub fn is_isomorphic(g1: &PlumbingGraph, g2: &PlumbingGraph) -> Option<BTreeMap<VertexId, VertexId>> {
    if g1.len() != g2.len() || g1.edges().len() != g2.edges().len() {
        return None;
    }
    let mut comps1: Vec<(String, VertexId, PlumbingGraph)> = g1
        .components()
        .into_iter()
        .map(|c| {
            let (code, root) = tree_code(&c);
            (code, root, c)
        })
        .collect();
    let mut comps2: Vec<(String, VertexId, PlumbingGraph)> = g2
        .components()
        .into_iter()
        .map(|c| {
            let (code, root) = tree_code(&c);
            (code, root, c)
        })
        .collect();
    if comps1.len() != comps2.len() {
        return None;
    }
    comps1.sort_by(|a, b| a.0.cmp(&b.0));
    comps2.sort_by(|a, b| a.0.cmp(&b.0));
    let mut map = BTreeMap::new();
    for ((code1, root1, c1), (code2, root2, c2)) in comps1.iter().zip(&comps2) {
        if code1 != code2 {
            return None;
        }
        match_rooted(c1, root1, None, c2, root2, None, &mut map);
    }
    Some(map)
}
