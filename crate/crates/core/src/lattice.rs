//! Exact linear algebra on the plumbing lattice `L = ⊕ ℤ E_v`.
//!
//! The intersection form `I` has the weights on the diagonal and `1` for each
//! edge. Determinants and definiteness are computed by symmetric elimination of
//! `-I` leaves-first along each tree of the forest. Eliminating a leaf touches
//! only its parent's diagonal, so there is no fill-in and no floating point.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{format_rational, rat};
use crate::graph::{Indexed, PlumbingGraph, VertexId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("cycle refers to vertex `{0}` outside the graph")]
    ForeignVertex(VertexId),
    #[error("intersection form is singular")]
    Singular,
    #[error("canonical cycle failed the adjunction check at `{0}`")]
    Adjunction(VertexId),
}

/// Integral cycle `Σ m_v E_v` with finite support.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cycle(BTreeMap<VertexId, i64>);

impl Cycle {
    pub fn new() -> Self {
        Self::default()
    }

    /// The basis element `E_v`.
    pub fn basis(v: &VertexId) -> Self {
        Cycle(BTreeMap::from([(v.clone(), 1)]))
    }

    /// `Σ_v E_v` over all vertices of `g`.
    pub fn reduced(g: &PlumbingGraph) -> Self {
        Cycle(g.vertices().map(|v| (v.clone(), 1)).collect())
    }

    pub fn from_pairs<'a>(pairs: impl IntoIterator<Item = (&'a VertexId, i64)>) -> Self {
        let mut c = Cycle::new();
        for (v, m) in pairs {
            c.add(v, m);
        }
        c
    }

    pub fn get(&self, v: &VertexId) -> i64 {
        self.0.get(v).copied().unwrap_or(0)
    }

    pub fn add(&mut self, v: &VertexId, m: i64) {
        let entry = self.0.entry(v.clone()).or_insert(0);
        *entry += m;
        if *entry == 0 {
            self.0.remove(v);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&VertexId, i64)> {
        self.0.iter().map(|(v, m)| (v, *m))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Multiplicities listed in the order of `ids`.
    pub fn to_vec(&self, ids: &[VertexId]) -> Vec<i64> {
        ids.iter().map(|v| self.get(v)).collect()
    }

    /// Whether `self ≤ other` coefficientwise.
    pub fn le(&self, other: &Cycle) -> bool {
        self.0.keys().chain(other.0.keys()).all(|v| self.get(v) <= other.get(v))
    }

    pub fn sum(&self, other: &Cycle) -> Cycle {
        let mut out = self.clone();
        for (v, m) in other.iter() {
            out.add(v, m);
        }
        out
    }
}

impl fmt::Display for Cycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|(v, m)| format!("{m}·{v}")).collect();
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// Rational cycle in `L ⊗ ℚ`; holds the canonical cycle `K`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct QCycle(pub BTreeMap<VertexId, BigRational>);

impl QCycle {
    pub fn get(&self, v: &VertexId) -> BigRational {
        self.0.get(v).cloned().unwrap_or_else(BigRational::zero)
    }
}

/// Anything that can be paired with the intersection form.
pub trait LatticeElement {
    fn coefficients(&self) -> Vec<(VertexId, BigRational)>;
}

impl LatticeElement for Cycle {
    fn coefficients(&self) -> Vec<(VertexId, BigRational)> {
        self.0.iter().map(|(v, m)| (v.clone(), rat(*m))).collect()
    }
}

impl LatticeElement for QCycle {
    fn coefficients(&self) -> Vec<(VertexId, BigRational)> {
        self.0.iter().map(|(v, q)| (v.clone(), q.clone())).collect()
    }
}

/// Symmetric matrix `I` indexed by the sorted vertex ids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionForm {
    pub ids: Vec<VertexId>,
    pub matrix: Vec<Vec<BigRational>>,
}

impl IntersectionForm {
    pub fn of(g: &PlumbingGraph) -> Self {
        let idx = g.indexed();
        let n = idx.ids.len();
        let mut matrix = vec![vec![BigRational::zero(); n]; n];
        for i in 0..n {
            matrix[i][i] = idx.weights[i].clone();
            for &j in &idx.adj[i] {
                matrix[i][j] = BigRational::one();
            }
        }
        IntersectionForm { ids: idx.ids, matrix }
    }

    /// Rows as arrays of `"p/q"` strings.
    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<Vec<String>> = self
            .matrix
            .iter()
            .map(|row| row.iter().map(format_rational).collect())
            .collect();
        serde_json::json!({ "vertices": self.ids, "matrix": rows })
    }
}

/// `(a, b) = aᵀ I b`.
pub fn pairing(g: &PlumbingGraph, a: &impl LatticeElement, b: &impl LatticeElement) -> Result<BigRational, LatticeError> {
    let a = a.coefficients();
    let b: BTreeMap<VertexId, BigRational> = b.coefficients().into_iter().collect();
    for v in b.keys() {
        if !g.contains(v) {
            return Err(LatticeError::ForeignVertex(v.clone()));
        }
    }
    let mut total = BigRational::zero();
    for (v, x) in &a {
        let w = g.weight(v).map_err(|_| LatticeError::ForeignVertex(v.clone()))?;
        if let Some(y) = b.get(v) {
            total += x * w * y;
        }
        for n in g.neighbors(v).unwrap() {
            if let Some(y) = b.get(n) {
                total += x * y;
            }
        }
    }
    Ok(total)
}

/// Parent links and a BFS order for each tree, rooted at its smallest id.
struct Rooting {
    order: Vec<usize>,
    parent: Vec<Option<usize>>,
}

fn rooting(idx: &Indexed) -> Rooting {
    let n = idx.ids.len();
    let mut parent = vec![None; n];
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let start = order.len();
        order.push(root);
        let mut i = start;
        while i < order.len() {
            let v = order[i];
            for &c in &idx.adj[v] {
                if !seen[c] {
                    seen[c] = true;
                    parent[c] = Some(v);
                    order.push(c);
                }
            }
            i += 1;
        }
    }
    Rooting { order, parent }
}

/// For each vertex `v`: `det(T_v)` and `det(T_v \ v)` where `T_v` is the
/// subtree hanging from `v` and `det` means `det(-I)`. Division-free, so it is
/// valid for any decoration, definite or not.
fn subtree_minors<T>(idx: &Indexed, rooting: &Rooting, neg_weights: &[T]) -> Vec<(T, T)>
where
    T: Clone + Zero + One,
    for<'a> &'a T: Add<&'a T, Output = T> + Mul<&'a T, Output = T> + Sub<&'a T, Output = T>,
{
    let n = idx.ids.len();
    let mut minors: Vec<Option<(T, T)>> = vec![None; n];
    for &v in rooting.order.iter().rev() {
        let children: Vec<&(T, T)> = idx.adj[v]
            .iter()
            .filter(|&&c| rooting.parent[v] != Some(c))
            .map(|&c| minors[c].as_ref().expect("children first"))
            .collect();
        let k = children.len();
        // prefix[i] = D_0 ⋯ D_{i-1}, suffix[i] = D_i ⋯ D_{k-1}
        let mut prefix = vec![T::one(); k + 1];
        for i in 0..k {
            prefix[i + 1] = &prefix[i] * &children[i].0;
        }
        let mut suffix = vec![T::one(); k + 1];
        for i in (0..k).rev() {
            suffix[i] = &suffix[i + 1] * &children[i].0;
        }
        let mut correction = T::zero();
        for i in 0..k {
            let others = &prefix[i] * &suffix[i + 1];
            let term = &children[i].1 * &others;
            correction = &correction + &term;
        }
        let prod = prefix[k].clone();
        let det = &(&neg_weights[v] * &prod) - &correction;
        minors[v] = Some((det, prod));
    }
    minors.into_iter().map(|m| m.expect("every vertex visited")).collect()
}

/// Per-vertex elimination data for `-I`, over `BigInt` when possible.
enum Minors {
    Integral(Vec<(BigInt, BigInt)>),
    Rational(Vec<(BigRational, BigRational)>),
}

fn minors_of(g: &PlumbingGraph) -> (Indexed, Rooting, Minors) {
    let idx = g.indexed();
    let rooting = rooting(&idx);
    let minors = if g.is_integral() {
        let neg: Vec<BigInt> = idx.weights.iter().map(|w| -w.to_integer()).collect();
        Minors::Integral(subtree_minors(&idx, &rooting, &neg))
    } else {
        let neg: Vec<BigRational> = idx.weights.iter().map(|w| -w.clone()).collect();
        Minors::Rational(subtree_minors(&idx, &rooting, &neg))
    };
    (idx, rooting, minors)
}

/// `det(Γ) := det(-I)`. Multiplicative over components, `det(∅) = 1`.
pub fn determinant(g: &PlumbingGraph) -> BigRational {
    let (_, rooting, minors) = minors_of(g);
    let roots = rooting.order.iter().filter(|&&v| rooting.parent[v].is_none());
    match minors {
        Minors::Integral(m) => {
            BigRational::from_integer(roots.fold(BigInt::one(), |acc, &r| acc * &m[r].0))
        }
        Minors::Rational(m) => roots.fold(BigRational::one(), |acc, &r| acc * &m[r].0),
    }
}

/// Signature verdict for the intersection form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Definiteness {
    NegativeDefinite,
    NegativeSemidefinite { corank: usize },
    Other,
}

impl Definiteness {
    pub fn is_negative_definite(self) -> bool {
        self == Definiteness::NegativeDefinite
    }

    pub fn is_negative_semidefinite(self) -> bool {
        !matches!(self, Definiteness::Other)
    }
}

impl fmt::Display for Definiteness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Definiteness::NegativeDefinite => f.write_str("negative definite"),
            Definiteness::NegativeSemidefinite { corank } => {
                write!(f, "negative semidefinite (corank {corank})")
            }
            Definiteness::Other => f.write_str("indefinite"),
        }
    }
}

fn classify_signs<T: Signed>(minors: &[(T, T)], rooting: &Rooting) -> Definiteness {
    let mut corank = 0;
    for &v in &rooting.order {
        let det = &minors[v].0;
        let is_root = rooting.parent[v].is_none();
        // pivot_v = det(T_v) / det(T_v \ v); the denominator is a product of
        // already-positive child determinants.
        if det.is_negative() {
            return Definiteness::Other;
        }
        if det.is_zero() {
            if is_root {
                corank += 1;
            } else {
                // zero pivot whose row still has the -1 towards its parent
                return Definiteness::Other;
            }
        }
    }
    if corank == 0 {
        Definiteness::NegativeDefinite
    } else {
        Definiteness::NegativeSemidefinite { corank }
    }
}

/// Symmetric leaves-first elimination of `-I`. All pivots positive gives
/// `NegativeDefinite`; zero pivots with vanishing rows give
/// `NegativeSemidefinite`; anything else is `Other`.
pub fn definiteness(g: &PlumbingGraph) -> Definiteness {
    let (_, rooting, minors) = minors_of(g);
    match minors {
        Minors::Integral(m) => classify_signs(&m, &rooting),
        Minors::Rational(m) => classify_signs(&m, &rooting),
    }
}

/// Solves `I x = b` exactly by Gauss–Jordan elimination.
fn solve(matrix: &[Vec<BigRational>], rhs: &[BigRational]) -> Option<Vec<BigRational>> {
    let n = rhs.len();
    let mut a: Vec<Vec<BigRational>> = matrix
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut r = row.clone();
            r.push(b.clone());
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        let inv = a[col][col].recip();
        for x in a[col].iter_mut() {
            *x *= &inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let factor = a[r][col].clone();
                for c in col..=n {
                    let delta = &factor * &a[col][c];
                    a[r][c] -= delta;
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[n].clone()).collect())
}

/// The canonical cycle `K`, defined by `(K + E_v, E_v) + 2 = 0` for all `v`.
pub fn canonical_cycle(g: &PlumbingGraph) -> Result<QCycle, LatticeError> {
    let form = IntersectionForm::of(g);
    let rhs: Vec<BigRational> = form
        .ids
        .iter()
        .map(|v| -g.weight(v).unwrap().clone() - rat(2))
        .collect();
    let solution = solve(&form.matrix, &rhs).ok_or(LatticeError::Singular)?;
    let k = QCycle(form.ids.iter().cloned().zip(solution).collect());
    for v in &form.ids {
        let e_v = Cycle::basis(v);
        let lhs = pairing(g, &k, &e_v)? + g.weight(v).unwrap() + rat(2);
        if !lhs.is_zero() {
            return Err(LatticeError::Adjunction(v.clone()));
        }
    }
    Ok(k)
}

/// Riemann–Roch expression `χ(l) = -(K + l, l) / 2`.
///
/// `(K, l)` is read off the adjunction relations, `(K, E_v) = -e_v - 2`, so no
/// linear solve is needed; the form must still be nondegenerate for `K` to
/// exist.
pub fn chi(g: &PlumbingGraph, l: &impl LatticeElement) -> Result<BigRational, LatticeError> {
    if determinant(g).is_zero() {
        return Err(LatticeError::Singular);
    }
    let mut k_dot_l = BigRational::zero();
    for (v, x) in l.coefficients() {
        let w = g.weight(&v).map_err(|_| LatticeError::ForeignVertex(v.clone()))?;
        k_dot_l += x * (-w.clone() - rat(2));
    }
    let l_dot_l = pairing(g, l, l)?;
    Ok(-(k_dot_l + l_dot_l) / rat(2))
}

/// Checks `det(Γ) = det(Γ \ e) - det(Γ \ [v, w])` for the edge `e = (v, w)`.
pub fn det_edge_identity_check(g: &PlumbingGraph, v: &VertexId, w: &VertexId) -> Result<bool, crate::graph::GraphError> {
    let without_edge = g.delete_edges(&[(v.clone(), w.clone())])?;
    let without_both = g.delete_vertices(&[v.clone(), w.clone()].into_iter().collect())?;
    Ok(determinant(g) == determinant(&without_edge) - determinant(&without_both))
}
