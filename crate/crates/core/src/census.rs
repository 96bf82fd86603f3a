//! Enumeration of connected negative definite trees up to isomorphism.
//!
//! A rooted decorated tree is its root weight plus a multiset of rooted child
//! trees. Children are drawn from a pool ordered by (size, index), so every
//! non-decreasing index sequence is one isomorphism class. Unrooted trees are
//! rooted at their centroid; with two centroids the tree is an unordered pair
//! of halves joined by the central edge.
//!
//! Each pool entry carries `det` of its subtree and the product of its
//! children's determinants. Negative definiteness means every rooted subtree
//! has positive determinant, so non-definite entries are dropped early.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classify::{classify, ClassificationReport, ClassifyError, ClassifyOptions};
use crate::exact::rat;
use crate::graph::{PlumbingGraph, VertexId};

pub const MAX_VERTICES: usize = 8;
pub const MIN_WEIGHT: i64 = -9;

#[derive(Debug, Error)]
pub enum CensusError {
    #[error("at most {MAX_VERTICES} vertices are supported, asked for {0}")]
    TooManyVertices(usize),
    #[error("weights below {MIN_WEIGHT} are not supported, asked for {0}")]
    WeightTooLow(i64),
    #[error("weights must be at most -1, asked for minimum {0}")]
    WeightTooHigh(i64),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusConfig {
    pub max_vertices: usize,
    pub weight_min: i64,
    /// Drop graphs with a `(-1)` vertex of valency at most two.
    pub minimal_only: bool,
}

impl Default for CensusConfig {
    fn default() -> Self {
        CensusConfig { max_vertices: 6, weight_min: -5, minimal_only: false }
    }
}

impl CensusConfig {
    fn validate(&self) -> Result<(), CensusError> {
        if self.max_vertices > MAX_VERTICES {
            return Err(CensusError::TooManyVertices(self.max_vertices));
        }
        if self.weight_min < MIN_WEIGHT {
            return Err(CensusError::WeightTooLow(self.weight_min));
        }
        if self.weight_min > -1 {
            return Err(CensusError::WeightTooHigh(self.weight_min));
        }
        Ok(())
    }

    fn weights(&self) -> impl Iterator<Item = i64> + Clone {
        (self.weight_min..=-1).rev()
    }
}

#[derive(Clone, Debug)]
struct Rooted {
    size: usize,
    weight: i64,
    children: Vec<u32>,
    det: i64,
    /// `det` of the subtree with its root removed.
    minor: i64,
}

/// Running products while a child multiset is built: `prod = Π det_c` and
/// `mixed = Σ_c minor_c Π_{c' ≠ c} det_{c'}`.
#[derive(Clone, Copy)]
struct Acc {
    prod: i64,
    mixed: i64,
}

impl Acc {
    const EMPTY: Acc = Acc { prod: 1, mixed: 0 };

    fn push(self, item: &Rooted) -> Acc {
        Acc { prod: self.prod * item.det, mixed: self.mixed * item.det + item.minor * self.prod }
    }

    /// `det` of the tree with a root of weight `e` over these children.
    fn det(self, e: i64) -> i64 {
        -e * self.prod - self.mixed
    }
}

struct Pool {
    items: Vec<Rooted>,
}

impl Pool {
    fn build(max_size: usize, cfg: &CensusConfig) -> Pool {
        let mut pool = Pool { items: Vec::new() };
        for size in 1..=max_size {
            let mut fresh = Vec::new();
            pool.multisets(size - 1, size - 1, 0, Acc::EMPTY, &mut Vec::new(), &mut |children, acc| {
                for e in cfg.weights() {
                    let det = acc.det(e);
                    // the root will have a parent, so its valency is one more
                    if det <= 0 || (cfg.minimal_only && e == -1 && children.len() + 1 <= 2) {
                        continue;
                    }
                    fresh.push(Rooted { size, weight: e, children: children.to_vec(), det, minor: acc.prod });
                }
            });
            pool.items.extend(fresh);
        }
        pool
    }

    /// Visits every non-decreasing sequence of pool indices `≥ start` whose
    /// sizes sum to `remaining`, each of size at most `cap`.
    fn multisets(
        &self,
        remaining: usize,
        cap: usize,
        start: usize,
        acc: Acc,
        cur: &mut Vec<u32>,
        visit: &mut dyn FnMut(&[u32], Acc),
    ) {
        if remaining == 0 {
            visit(cur, acc);
            return;
        }
        for i in start..self.items.len() {
            let item = &self.items[i];
            if item.size > remaining || item.size > cap {
                break;
            }
            cur.push(i as u32);
            self.multisets(remaining - item.size, cap, i, acc.push(item), cur, visit);
            cur.pop();
        }
    }

    fn write(&self, idx: u32, parent: Option<&VertexId>, g: &mut PlumbingGraph) -> VertexId {
        let item = &self.items[idx as usize];
        let id = add_next(g, item.weight, parent);
        for &c in &item.children {
            self.write(c, Some(&id), g);
        }
        id
    }
}

fn add_next(g: &mut PlumbingGraph, weight: i64, parent: Option<&VertexId>) -> VertexId {
    let id = VertexId::new(format!("v{}", g.len())).unwrap();
    g.add_vertex(id.clone(), rat(weight)).unwrap();
    if let Some(p) = parent {
        g.add_edge(p, &id).unwrap();
    }
    id
}

/// One unrooted tree found by the enumeration, before materialisation.
#[derive(Clone, Debug)]
enum Shape {
    Centroid { weight: i64, children: Vec<u32> },
    Bicentroid(u32, u32),
}

#[derive(Clone, Copy)]
enum Job {
    Single,
    Centroid { n: usize, first: usize },
    Bicentroid { n: usize, first: usize },
}

/// Enumerator for one configuration; cheap to query repeatedly.
pub struct Census {
    cfg: CensusConfig,
    pool: Pool,
}

impl Census {
    pub fn new(cfg: CensusConfig) -> Result<Census, CensusError> {
        cfg.validate()?;
        let pool = Pool::build(cfg.max_vertices / 2, &cfg);
        Ok(Census { cfg, pool })
    }

    pub fn config(&self) -> &CensusConfig {
        &self.cfg
    }

    fn jobs(&self) -> Vec<Job> {
        let mut jobs = vec![Job::Single];
        for n in 2..=self.cfg.max_vertices {
            let cap = (n - 1) / 2;
            for (i, item) in self.pool.items.iter().enumerate() {
                if item.size <= cap {
                    jobs.push(Job::Centroid { n, first: i });
                }
            }
            if n % 2 == 0 {
                for (i, item) in self.pool.items.iter().enumerate() {
                    if item.size == n / 2 {
                        jobs.push(Job::Bicentroid { n, first: i });
                    }
                }
            }
        }
        jobs
    }

    fn run_job(&self, job: Job, filter: &(dyn Fn(usize, i64) -> bool + Sync)) -> Vec<Shape> {
        let mut out = Vec::new();
        let minimal = self.cfg.minimal_only;
        match job {
            Job::Single => {
                for e in self.cfg.weights() {
                    if Acc::EMPTY.det(e) > 0 && filter(1, -e) {
                        out.push(Shape::Centroid { weight: e, children: Vec::new() });
                    }
                }
            }
            Job::Centroid { n, first } => {
                let item = &self.pool.items[first];
                let cap = (n - 1) / 2;
                let mut cur = vec![first as u32];
                self.pool.multisets(n - 1 - item.size, cap, first, Acc::EMPTY.push(item), &mut cur, &mut |children, acc| {
                    for e in self.cfg.weights() {
                        let det = acc.det(e);
                        if det <= 0 || (minimal && e == -1 && children.len() <= 2) || !filter(n, det) {
                            continue;
                        }
                        out.push(Shape::Centroid { weight: e, children: children.to_vec() });
                    }
                });
            }
            Job::Bicentroid { n, first } => {
                let a = &self.pool.items[first];
                for (j, b) in self.pool.items.iter().enumerate().skip(first) {
                    if b.size != n / 2 {
                        continue;
                    }
                    let det = a.det * b.det - a.minor * b.minor;
                    if det > 0 && filter(n, det) {
                        out.push(Shape::Bicentroid(first as u32, j as u32));
                    }
                }
            }
        }
        out
    }

    fn materialise(&self, shape: &Shape) -> PlumbingGraph {
        let mut g = PlumbingGraph::new();
        match shape {
            Shape::Centroid { weight, children } => {
                let root = add_next(&mut g, *weight, None);
                for &c in children {
                    self.pool.write(c, Some(&root), &mut g);
                }
            }
            Shape::Bicentroid(a, b) => {
                let ra = self.pool.write(*a, None, &mut g);
                self.pool.write(*b, Some(&ra), &mut g);
            }
        }
        g
    }

    /// All graphs whose vertex count and determinant pass `filter`, in a
    /// fixed order: by vertex count, then by pool position.
    pub fn graphs_where(&self, filter: impl Fn(usize, i64) -> bool + Sync) -> Vec<PlumbingGraph> {
        let jobs = self.jobs();
        let shapes: Vec<Vec<Shape>> = jobs.par_iter().map(|&j| self.run_job(j, &filter)).collect();
        let flat: Vec<&Shape> = shapes.iter().flatten().collect();
        flat.par_iter().map(|s| self.materialise(s)).collect()
    }

    pub fn graphs(&self) -> Vec<PlumbingGraph> {
        self.graphs_where(|_, _| true)
    }

    /// Number of graphs passing `filter`, without building them.
    pub fn count_where(&self, filter: impl Fn(usize, i64) -> bool + Sync) -> usize {
        self.jobs().par_iter().map(|&j| self.run_job(j, &filter).len()).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusRecord {
    /// Graph in the text format, vertices `v0, v1, …` in preorder.
    pub graph: String,
    pub vertices: usize,
    pub report: ClassificationReport,
    pub micros: u64,
}

/// Classifies every graph of the census; order matches [`Census::graphs`].
pub fn census(cfg: &CensusConfig, opts: &ClassifyOptions) -> Result<Vec<CensusRecord>, CensusError> {
    let c = Census::new(cfg.clone())?;
    c.graphs()
        .par_iter()
        .map(|g| {
            let t = Instant::now();
            let report = classify(g, opts)?;
            Ok(CensusRecord { graph: g.to_text(), vertices: g.len(), report, micros: t.elapsed().as_micros() as u64 })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use super::*;
    use crate::graph::canonical_code;
    use crate::lattice::{definiteness, determinant};

    /// Brute force: every labelled tree via Prüfer codes, every weighting,
    /// deduplicated by canonical code.
    fn brute(n_max: usize, wmin: i64, minimal: bool) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        let weights: Vec<i64> = (wmin..=-1).collect();
        for n in 1..=n_max {
            let mut edges_list: Vec<Vec<(usize, usize)>> = Vec::new();
            if n == 1 {
                edges_list.push(Vec::new());
            } else if n == 2 {
                edges_list.push(vec![(0, 1)]);
            } else {
                let total = n.pow((n - 2) as u32);
                for code in 0..total {
                    let mut seq = Vec::new();
                    let mut c = code;
                    for _ in 0..n - 2 {
                        seq.push(c % n);
                        c /= n;
                    }
                    let mut degree = vec![1; n];
                    for &s in &seq {
                        degree[s] += 1;
                    }
                    let mut edges = Vec::new();
                    for &s in &seq {
                        let leaf = (0..n).find(|&i| degree[i] == 1).unwrap();
                        edges.push((leaf, s));
                        degree[leaf] -= 1;
                        degree[s] -= 1;
                    }
                    let rest: Vec<usize> = (0..n).filter(|&i| degree[i] == 1).collect();
                    edges.push((rest[0], rest[1]));
                    edges_list.push(edges);
                }
            }
            for edges in &edges_list {
                let mut idx = vec![0usize; n];
                loop {
                    let names: Vec<String> = (0..n).map(|i| format!("u{i}")).collect();
                    let vs: Vec<(&str, i64)> = (0..n).map(|i| (names[i].as_str(), weights[idx[i]])).collect();
                    let es: Vec<(&str, &str)> = edges.iter().map(|&(a, b)| (names[a].as_str(), names[b].as_str())).collect();
                    let g = PlumbingGraph::from_parts(&vs, &es);
                    if definiteness(&g).is_negative_definite() && (!minimal || g.is_minimal()) {
                        out.insert(canonical_code(&g));
                    }
                    let mut k = 0;
                    while k < n {
                        idx[k] += 1;
                        if idx[k] < weights.len() {
                            break;
                        }
                        idx[k] = 0;
                        k += 1;
                    }
                    if k == n {
                        break;
                    }
                }
            }
        }
        out
    }

    #[test]
    fn single_vertices() {
        let c = Census::new(CensusConfig { max_vertices: 1, weight_min: -3, minimal_only: false }).unwrap();
        assert_eq!(c.graphs().len(), 3);
    }

    #[test]
    fn matches_brute_force() {
        for (n, w, minimal) in [(5, -3, false), (5, -3, true), (6, -2, false), (4, -4, true)] {
            let c = Census::new(CensusConfig { max_vertices: n, weight_min: w, minimal_only: minimal }).unwrap();
            let graphs = c.graphs();
            let codes: Vec<String> = graphs.iter().map(canonical_code).collect();
            let set: BTreeSet<String> = codes.iter().cloned().collect();
            assert_eq!(set.len(), codes.len(), "duplicates for {n} {w}");
            assert_eq!(set, brute(n, w, minimal), "mismatch for {n} {w} {minimal}");
        }
    }

    #[test]
    fn determinants_and_filters() {
        let c = Census::new(CensusConfig { max_vertices: 6, weight_min: -4, minimal_only: false }).unwrap();
        let all = c.graphs();
        for g in &all {
            assert!(g.is_connected());
            assert!(definiteness(g).is_negative_definite());
        }
        let unimodular = c.graphs_where(|_, det| det == 1);
        assert_eq!(unimodular.len(), all.iter().filter(|g| determinant(g) == rat(1)).count());
        assert_eq!(c.count_where(|_, _| true), all.len());
        assert_eq!(c.graphs().iter().map(|g| g.to_text()).collect::<Vec<_>>(), all.iter().map(|g| g.to_text()).collect::<Vec<_>>());
    }

    #[test]
    fn limits() {
        assert!(Census::new(CensusConfig { max_vertices: 9, ..Default::default() }).is_err());
        assert!(Census::new(CensusConfig { weight_min: -10, ..Default::default() }).is_err());
        assert!(Census::new(CensusConfig { weight_min: 0, ..Default::default() }).is_err());
    }

    #[test]
    fn classified_records() {
        let cfg = CensusConfig { max_vertices: 3, weight_min: -2, minimal_only: false };
        let recs = census(&cfg, &ClassifyOptions::default()).unwrap();
        assert!(recs.iter().all(|r| r.report.is_consistent()));
        assert!(recs.iter().all(|r| r.report.rational == Some(true)));
    }
}
