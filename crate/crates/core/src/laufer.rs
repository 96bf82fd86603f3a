//! Laufer's computation sequence, the fundamental cycle `Z_min`, the
//! rationality test and bad vertex sets.

use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::rat;
use crate::graph::{GraphError, PlumbingGraph, VertexId};
use crate::lattice::{self, Cycle, LatticeError};

/// Hard cap on the number of Laufer steps; reaching it is reported as an error.
pub const MAX_STEPS: usize = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LauferError {
    #[error("graph is empty")]
    Empty,
    #[error("graph is not connected")]
    Disconnected,
    #[error("graph is not negative definite")]
    NotNegativeDefinite,
    #[error("weight of `{0}` is not an integer")]
    NonIntegral(VertexId),
    #[error("computation sequence exceeded {MAX_STEPS} steps")]
    Diverged,
    #[error("Laufer and Artin criteria disagree")]
    CriteriaDisagree,
    #[error("lowering the bad set did not stabilise within {0} decrements")]
    LoweringCap(usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub cycle_before: Cycle,
    pub vertex: VertexId,
    pub pairing: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComputationSequence {
    pub steps: Vec<Step>,
    pub final_cycle: Cycle,
}

/// First step of the sequence whose pairing exceeds one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Jump {
    pub step: usize,
    pub vertex: VertexId,
    pub pairing: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalityVerdict {
    pub rational: bool,
    pub jump: Option<Jump>,
    pub z_min: Cycle,
    #[serde(with = "crate::exact::as_str")]
    pub chi_zmin: BigRational,
}

/// Integer data the Laufer loop runs on.
struct IntGraph {
    ids: Vec<VertexId>,
    weights: Vec<i64>,
    adj: Vec<Vec<usize>>,
}

fn prepare(g: &PlumbingGraph) -> Result<IntGraph, LauferError> {
    if g.is_empty() {
        return Err(LauferError::Empty);
    }
    if !g.is_connected() {
        return Err(LauferError::Disconnected);
    }
    let idx = g.indexed();
    let mut weights = Vec::with_capacity(idx.ids.len());
    for id in &idx.ids {
        weights.push(g.integer_weight(id).ok_or_else(|| LauferError::NonIntegral(id.clone()))?);
    }
    if !lattice::definiteness(g).is_negative_definite() {
        return Err(LauferError::NotNegativeDefinite);
    }
    Ok(IntGraph { ids: idx.ids, weights, adj: idx.adj })
}

/// Runs the sequence from `Σ E_v`. `choose` picks among the indices with
/// positive pairing (listed in id order); `record` sees every step.
fn run(
    ig: &IntGraph,
    choose: &mut dyn FnMut(&[usize]) -> usize,
    mut record: impl FnMut(&[i64], usize, i64),
) -> Result<Vec<i64>, LauferError> {
    let n = ig.ids.len();
    let mut cycle = vec![1i64; n];
    // pairing[v] = (l, E_v), maintained incrementally
    let mut pairing: Vec<i64> = (0..n).map(|v| ig.weights[v] + ig.adj[v].len() as i64).collect();
    let mut candidates = Vec::with_capacity(n);
    for _ in 0..MAX_STEPS {
        candidates.clear();
        candidates.extend((0..n).filter(|&v| pairing[v] > 0));
        if candidates.is_empty() {
            return Ok(cycle);
        }
        let v = candidates[choose(&candidates).min(candidates.len() - 1)];
        record(&cycle, v, pairing[v]);
        cycle[v] += 1;
        pairing[v] += ig.weights[v];
        for &w in &ig.adj[v] {
            pairing[w] += 1;
        }
    }
    Err(LauferError::Diverged)
}

fn to_cycle(ids: &[VertexId], values: &[i64]) -> Cycle {
    Cycle::from_pairs(ids.iter().zip(values.iter().copied()))
}

/// `Z_min` together with the full computation sequence, choosing the smallest
/// vertex id whenever several pairings are positive.
pub fn z_min(g: &PlumbingGraph) -> Result<(Cycle, ComputationSequence), LauferError> {
    z_min_with(g, &mut |_| 0)
}

/// [`z_min`] with a caller-supplied tie-break. `choose` receives the candidate
/// vertices in id order and returns the index of the one to add.
pub fn z_min_with(
    g: &PlumbingGraph,
    choose: &mut dyn FnMut(&[&VertexId]) -> usize,
) -> Result<(Cycle, ComputationSequence), LauferError> {
    let ig = prepare(g)?;
    let mut steps = Vec::new();
    let ids = ig.ids.clone();
    let mut by_index = |cands: &[usize]| {
        let named: Vec<&VertexId> = cands.iter().map(|&i| &ids[i]).collect();
        choose(&named)
    };
    let final_values = run(&ig, &mut by_index, |cycle, v, p| {
        steps.push(Step { cycle_before: to_cycle(&ig.ids, cycle), vertex: ig.ids[v].clone(), pairing: p });
    })?;
    let final_cycle = to_cycle(&ig.ids, &final_values);
    Ok((final_cycle.clone(), ComputationSequence { steps, final_cycle }))
}

/// Laufer's test (every step has pairing 1) cross-checked against Artin's
/// `χ(Z_min) ≥ 1`.
pub fn is_rational(g: &PlumbingGraph) -> Result<RationalityVerdict, LauferError> {
    let ig = prepare(g)?;
    let mut jump = None;
    let mut step = 0usize;
    let z = run(&ig, &mut |_| 0, |_, v, p| {
        if p >= 2 && jump.is_none() {
            jump = Some(Jump { step, vertex: ig.ids[v].clone(), pairing: p });
        }
        step += 1;
    })?;
    let z_min = to_cycle(&ig.ids, &z);
    let chi_zmin = lattice::chi(g, &z_min)?;
    let rational = jump.is_none();
    if rational != (chi_zmin >= BigRational::one()) {
        return Err(LauferError::CriteriaDisagree);
    }
    Ok(RationalityVerdict { rational, jump, z_min, chi_zmin })
}

/// Boolean rationality without the Artin cross-check; the hot path for census
/// sweeps.
pub fn is_rational_fast(g: &PlumbingGraph) -> Result<bool, LauferError> {
    let ig = prepare(g)?;
    let mut rational = true;
    run(&ig, &mut |_| 0, |_, _, p| {
        if p >= 2 {
            rational = false;
        }
    })?;
    Ok(rational)
}

/// `Γ↓`: lowers `e_v` for `v ∈ B` one unit at a time until every such `E_v`
/// has multiplicity one in `Z_min`. Past that point further lowering does not
/// change the computation sequence outside `B`.
pub fn lower_bad_set(g: &PlumbingGraph, bad: &BTreeSet<VertexId>) -> Result<PlumbingGraph, LauferError> {
    for v in bad {
        if !g.contains(v) {
            return Err(GraphError::UnknownVertex(v.clone()).into());
        }
    }
    let max_abs = g
        .weights()
        .map(|(_, w)| w.abs().to_integer())
        .max()
        .and_then(|m| num_traits::ToPrimitive::to_usize(&m))
        .unwrap_or(1)
        .max(1);
    let cap = 4 * g.len() * max_abs;
    let mut current = g.clone();
    let mut decrements = 0usize;
    loop {
        let (z, _) = z_min(&current)?;
        let heavy: Vec<&VertexId> = bad.iter().filter(|v| z.get(v) > 1).collect();
        if heavy.is_empty() {
            return Ok(current);
        }
        for v in heavy {
            let w = current.weight(v)?.clone() - rat(1);
            current = current.with_weight(v, w)?;
            decrements += 1;
        }
        if decrements > cap {
            return Err(LauferError::LoweringCap(cap));
        }
    }
}

/// Whether `B` is a set of bad vertices: lowering its decorations far enough
/// makes the graph rational.
pub fn is_bad_set(g: &PlumbingGraph, bad: &BTreeSet<VertexId>) -> Result<bool, LauferError> {
    let lowered = lower_bad_set(g, bad)?;
    is_rational_fast(&lowered)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BadSetSearch {
    /// `m(Γ)`, the size of a smallest bad set.
    pub m: usize,
    /// Lexicographically least smallest bad set, node subsets tried first.
    pub witness: BTreeSet<VertexId>,
    /// Set when the witness had to use a vertex of valency below three.
    pub uses_non_node: bool,
}

fn combinations(items: &[VertexId], k: usize, mut visit: impl FnMut(&[VertexId]) -> bool) -> bool {
    fn rec(items: &[VertexId], k: usize, start: usize, cur: &mut Vec<VertexId>, visit: &mut dyn FnMut(&[VertexId]) -> bool) -> bool {
        if cur.len() == k {
            return visit(cur);
        }
        for i in start..items.len() {
            if items.len() - i < k - cur.len() {
                break;
            }
            cur.push(items[i].clone());
            if rec(items, k, i + 1, cur, visit) {
                return true;
            }
            cur.pop();
        }
        false
    }
    rec(items, k, 0, &mut Vec::with_capacity(k), &mut visit)
}

/// Exhaustive search for `m(Γ) = min |B|` over bad sets `B`, by increasing
/// size. For each size the node subsets are tried before the rest.
pub fn min_bad(g: &PlumbingGraph) -> Result<BadSetSearch, LauferError> {
    let nodes: Vec<VertexId> = g.nodes().into_iter().collect();
    let all: Vec<VertexId> = g.vertices().cloned().collect();
    for k in 0..=all.len() {
        let mut found: Option<Result<BTreeSet<VertexId>, LauferError>> = None;
        combinations(&nodes, k, |subset| {
            let set: BTreeSet<VertexId> = subset.iter().cloned().collect();
            match is_bad_set(g, &set) {
                Ok(true) => {
                    found = Some(Ok(set));
                    true
                }
                Ok(false) => false,
                Err(e) => {
                    found = Some(Err(e));
                    true
                }
            }
        });
        if let Some(result) = found {
            return Ok(BadSetSearch { m: k, witness: result?, uses_non_node: false });
        }
        combinations(&all, k, |subset| {
            if subset.iter().all(|v| nodes.contains(v)) {
                return false;
            }
            let set: BTreeSet<VertexId> = subset.iter().cloned().collect();
            match is_bad_set(g, &set) {
                Ok(true) => {
                    found = Some(Ok(set));
                    true
                }
                Ok(false) => false,
                Err(e) => {
                    found = Some(Err(e));
                    true
                }
            }
        });
        if let Some(result) = found {
            return Ok(BadSetSearch { m: k, witness: result?, uses_non_node: true });
        }
    }
    // B = V always works: every lowered vertex gets multiplicity one and the
    // sequence stops at Σ E_v.
    unreachable!("the full vertex set is always bad")
}

/// One violation found by [`monotonicity_suite`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonotonicityViolation {
    pub description: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonotonicityReport {
    pub subgraphs_checked: usize,
    pub decreases_checked: usize,
    pub violations: Vec<MonotonicityViolation>,
}

impl MonotonicityReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks subgraph and decoration monotonicity around `g`: every component of
/// `Γ \ v` and every single decrement `e_v - 1` must stay rational when `Γ`
/// is, and a bad set of `Γ` restricted to a subgraph must stay bad there.
pub fn monotonicity_suite(g: &PlumbingGraph) -> Result<MonotonicityReport, LauferError> {
    let verdict = is_rational_fast(g)?;
    let bad = min_bad(g)?;
    let mut report = MonotonicityReport::default();
    for v in g.vertices() {
        let rest = g.delete_vertex(v)?;
        for comp in rest.components() {
            report.subgraphs_checked += 1;
            let sub_rational = is_rational_fast(&comp)?;
            if verdict && !sub_rational {
                report.violations.push(MonotonicityViolation {
                    description: format!("component of Γ \\ {v} is not rational"),
                });
            }
            let restricted: BTreeSet<VertexId> =
                bad.witness.iter().filter(|b| comp.contains(b)).cloned().collect();
            if !is_bad_set(&comp, &restricted)? {
                report.violations.push(MonotonicityViolation {
                    description: format!("restricted bad set is not bad on a component of Γ \\ {v}"),
                });
            }
        }
        report.decreases_checked += 1;
        let lowered = g.with_weight(v, g.weight(v)?.clone() - rat(1))?;
        if verdict && !is_rational_fast(&lowered)? {
            report.violations.push(MonotonicityViolation {
                description: format!("lowering e_{v} destroys rationality"),
            });
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::graph::vid;

    #[test]
    fn z_min_of_minus_two_path_is_reduced_cycle() {
        for n in 1..6 {
            let g = fixtures::path(n, -2);
            let (z, seq) = z_min(&g).unwrap();
            assert_eq!(z, Cycle::reduced(&g));
            assert!(seq.steps.is_empty());
        }
    }

    #[test]
    fn z_min_sigma_2_3_7() {
        let g = fixtures::sigma_2_3_7();
        let (z, seq) = z_min(&g).unwrap();
        assert_eq!(z.to_vec(&[vid("c"), vid("a2"), vid("a3"), vid("a7")]), vec![6, 3, 2, 1]);
        assert_eq!(seq.steps[0].vertex, vid("c"));
        assert_eq!(seq.steps[0].pairing, 2);
        assert_eq!(seq.final_cycle, z);
        for (i, step) in seq.steps.iter().enumerate() {
            assert!(step.pairing > 0);
            let next = seq.steps.get(i + 1).map(|s| &s.cycle_before).unwrap_or(&seq.final_cycle);
            assert_eq!(*next, step.cycle_before.sum(&Cycle::basis(&step.vertex)));
        }
    }

    #[test]
    fn rationality_examples() {
        let single = PlumbingGraph::from_parts(&[("a", -1)], &[]);
        assert!(is_rational(&single).unwrap().rational);

        let e8 = is_rational(&fixtures::e8()).unwrap();
        assert!(e8.rational);
        assert_eq!(e8.chi_zmin, rat(1));
        assert!(e8.jump.is_none());

        let v = is_rational(&fixtures::sigma_2_3_7()).unwrap();
        assert!(!v.rational);
        assert_eq!(v.jump, Some(Jump { step: 0, vertex: vid("c"), pairing: 2 }));
        assert_eq!(v.chi_zmin, rat(0));
    }

    #[test]
    fn laufer_preconditions() {
        let semi = PlumbingGraph::from_parts(&[("a", -2), ("u", -1), ("b", -2)], &[("a", "u"), ("u", "b")]);
        assert_eq!(z_min(&semi).unwrap_err(), LauferError::NotNegativeDefinite);
        let two = PlumbingGraph::from_parts(&[("a", -2), ("b", -2)], &[]);
        assert_eq!(z_min(&two).unwrap_err(), LauferError::Disconnected);
        let frac = PlumbingGraph::parse("vertex a -7/2").unwrap();
        assert_eq!(z_min(&frac).unwrap_err(), LauferError::NonIntegral(vid("a")));
        assert_eq!(z_min(&PlumbingGraph::new()).unwrap_err(), LauferError::Empty);
    }

    #[test]
    fn bad_set_examples() {
        let e8 = fixtures::e8();
        assert!(is_bad_set(&e8, &BTreeSet::new()).unwrap());
        let star = fixtures::sigma_2_3_7();
        assert!(is_bad_set(&star, &BTreeSet::from([vid("c")])).unwrap());
        assert!(!is_bad_set(&star, &BTreeSet::new()).unwrap());
        let lowered = lower_bad_set(&star, &BTreeSet::from([vid("c")])).unwrap();
        assert_eq!(lowered.weight(&vid("c")).unwrap(), &rat(-3));
        assert!(is_bad_set(&star, &BTreeSet::from([vid("zz")])).is_err());
    }

    #[test]
    fn min_bad_examples() {
        let e8 = min_bad(&fixtures::e8()).unwrap();
        assert_eq!((e8.m, e8.witness.len()), (0, 0));
        let star = min_bad(&fixtures::sigma_2_3_7()).unwrap();
        assert_eq!(star.m, 1);
        assert_eq!(star.witness, BTreeSet::from([vid("c")]));
        assert!(!star.uses_non_node);
        let two = min_bad(&fixtures::two_star_chain()).unwrap();
        assert_eq!(two.m, 2);
    }

    #[test]
    fn monotonicity_examples() {
        let e8 = fixtures::e8();
        let minus_leaf = e8.delete_vertex(&vid("d4")).unwrap();
        assert!(is_rational(&minus_leaf).unwrap().rational);
        let lowered = e8.with_weight(&vid("b2"), rat(-3)).unwrap();
        assert!(is_rational(&lowered).unwrap().rational);
        assert!(monotonicity_suite(&e8).unwrap().passed());
        let report = monotonicity_suite(&fixtures::sigma_2_3_7()).unwrap();
        assert!(report.passed());
        assert_eq!(report.decreases_checked, 4);
    }
}
