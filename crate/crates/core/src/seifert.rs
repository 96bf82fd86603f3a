//! Star-shaped graphs as Seifert fibered homology spheres and the numerical
//! criteria available for them.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{rat, ratio};
use crate::graph::{GraphError, PlumbingGraph, VertexId};
use crate::lattice::determinant;
use crate::laufer::{is_rational_fast, LauferError};
use crate::surgery::cf::{evaluate, negative_cf};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeifertError {
    #[error("graph is not star-shaped with a single node")]
    NotStar,
    #[error("weight of `{0}` is not an integer")]
    NonIntegral(VertexId),
    #[error("leg vertex `{0}` has weight above -2")]
    LegWeight(VertexId),
    #[error("invalid Seifert invariants: {0}")]
    Invariant(String),
    #[error("orbifold Euler number must be negative")]
    NonNegativeEuler,
    #[error("expected three exceptional fibers, found {0}")]
    WrongLegCount(usize),
    #[error("Brieskorn exponents must be pairwise coprime and at least 2")]
    Brieskorn,
    #[error("no Seifert invariants reproduce a homology sphere")]
    SearchFailed,
    #[error("internal cross-check failed: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Laufer(#[from] LauferError),
}

/// Unnormalised invariants `(e_0; (α_1, ω_1), …, (α_ν, ω_ν))`, `0 < ω_i < α_i`,
/// legs sorted ascending.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SeifertData {
    pub e0: i64,
    pub legs: Vec<(i64, i64)>,
}

impl fmt::Display for SeifertData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}", self.e0)?;
        for (a, w) in &self.legs {
            write!(f, "; ({a},{w})")?;
        }
        f.write_str(")")
    }
}

impl SeifertData {
    pub fn new(e0: i64, mut legs: Vec<(i64, i64)>) -> Result<Self, SeifertError> {
        for &(a, w) in &legs {
            if !(0 < w && w < a) || a.gcd(&w) != 1 {
                return Err(SeifertError::Invariant(format!("leg ({a},{w})")));
            }
        }
        legs.sort_unstable();
        Ok(SeifertData { e0, legs })
    }

    pub fn nu(&self) -> usize {
        self.legs.len()
    }
}

/// Reads `(e_0; (α_i, ω_i))` off a star-shaped graph: one node, every other
/// vertex on a leg of `-2`-or-lower weights, `α_i/ω_i = [b_1, …, b_s]` with
/// `b_j = -e_j` read outward from the center.
pub fn star_to_seifert(g: &PlumbingGraph) -> Result<SeifertData, SeifertError> {
    let nodes = g.nodes();
    if nodes.len() != 1 || !g.is_connected() {
        return Err(SeifertError::NotStar);
    }
    let center = nodes.into_iter().next().unwrap();
    let e0 = g.integer_weight(&center).ok_or_else(|| SeifertError::NonIntegral(center.clone()))?;
    let mut legs = Vec::new();
    for start in g.neighbors(&center)? {
        let mut prev = center.clone();
        let mut cur = start.clone();
        let mut terms = Vec::new();
        loop {
            let w = g.integer_weight(&cur).ok_or_else(|| SeifertError::NonIntegral(cur.clone()))?;
            if w > -2 {
                return Err(SeifertError::LegWeight(cur.clone()));
            }
            terms.push(BigInt::from(-w));
            let next: Vec<&VertexId> = g.neighbors(&cur)?.iter().filter(|n| **n != prev).collect();
            match next.as_slice() {
                [] => break,
                [n] => {
                    prev = cur;
                    cur = (*n).clone();
                }
                _ => return Err(SeifertError::NotStar),
            }
        }
        let q = evaluate(&terms).ok_or(SeifertError::NotStar)?;
        legs.push((q.numer().to_i64().unwrap(), q.denom().to_i64().unwrap()));
    }
    SeifertData::new(e0, legs)
}

/// Star with center `c` of weight `e_0` and leg `i` (1-based) decorated by
/// `negative_cf(-α_i/ω_i)`, vertices `l{i}_{j}`.
pub fn seifert_to_graph(sd: &SeifertData) -> Result<PlumbingGraph, SeifertError> {
    let checked = SeifertData::new(sd.e0, sd.legs.clone())?;
    if checked.nu() < 3 {
        return Err(SeifertError::Invariant(format!("{} legs", checked.nu())));
    }
    let mut g = PlumbingGraph::new();
    let c = VertexId::new("c")?;
    g.add_vertex(c.clone(), rat(sd.e0))?;
    for (i, &(a, w)) in sd.legs.iter().enumerate() {
        let cf = negative_cf(&ratio(-a, w)).map_err(|e| SeifertError::Invariant(e.to_string()))?;
        let mut prev = c.clone();
        for (j, e) in cf.terms.iter().enumerate() {
            let id = VertexId::new(format!("l{}_{}", i + 1, j + 1))?;
            g.add_vertex(id.clone(), BigRational::from_integer(e.clone()))?;
            g.add_edge(&prev, &id)?;
            prev = id;
        }
    }
    Ok(g)
}

/// `e = e_0 + Σ ω_i/α_i`.
pub fn orbifold_euler(sd: &SeifertData) -> BigRational {
    sd.legs.iter().fold(rat(sd.e0), |acc, &(a, w)| acc + ratio(w, a))
}

/// `l` with `Σ ⌊-l ω_i/α_i⌋ ≤ l e_0 - 2` among `0..=limit`, smallest first.
pub fn pinkham_scan(sd: &SeifertData, limit: i64) -> Option<i64> {
    (0..=limit).find(|&l| {
        let s: i128 = sd
            .legs
            .iter()
            .map(|&(a, w)| Integer::div_floor(&(-(l as i128) * w as i128), &(a as i128)))
            .sum();
        s <= l as i128 * sd.e0 as i128 - 2
    })
}

/// `⌈(ν-2)/|e|⌉`. Any witness satisfies `l·|e| < ν - 2`, so scanning up to
/// this bound is complete.
pub fn pinkham_bound(sd: &SeifertData) -> Result<i64, SeifertError> {
    let e = orbifold_euler(sd);
    if !e.is_negative() {
        return Err(SeifertError::NonNegativeEuler);
    }
    let nu = sd.nu() as i64;
    if nu <= 2 {
        return Ok(0);
    }
    let b = (rat(nu - 2) / e.abs()).ceil().to_integer();
    b.to_i64().ok_or_else(|| SeifertError::Invariant("Pinkham bound overflow".into()))
}

/// Non-rationality by the Pinkham criterion; returns the witness `l` if any.
pub fn pinkham_nonrational(sd: &SeifertData) -> Result<(bool, Option<i64>), SeifertError> {
    let bound = pinkham_bound(sd)?;
    let l = pinkham_scan(sd, bound);
    Ok((l.is_some(), l))
}

/// `(m, a)` with `1 ≤ a < m`, `gcd(a, m) = 1`, and the permutation mapping
/// inputs to `(x, y, z)`: `x < a/m`, `y < (m-a)/m`, `z < 1/m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Realization {
    pub m: i64,
    pub a: i64,
    pub perm: [usize; 3],
}

const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

/// Searches `m` ascending, then permutations (identity first), then `a`
/// ascending. Finite because `z < 1/m` bounds `m` by `1/min`.
pub fn realizable(values: [&BigRational; 3]) -> Result<Option<Realization>, SeifertError> {
    if values.iter().any(|v| !v.is_positive() || **v >= rat(1)) {
        return Err(SeifertError::Invariant("realizability needs values in (0,1)".into()));
    }
    let min: &BigRational = values.iter().copied().min().unwrap();
    let m_max: i64 = (min.recip().ceil().to_integer() - BigInt::from(1)).to_i64().unwrap_or(i64::MAX);
    for m in 2..=m_max {
        for perm in PERMS {
            let (x, y, z) = (values[perm[0]], values[perm[1]], values[perm[2]]);
            if *z >= ratio(1, m) {
                continue;
            }
            for a in 1..m {
                if a.gcd(&m) == 1 && *x < ratio(a, m) && *y < ratio(m - a, m) {
                    return Ok(Some(Realization { m, a, perm }));
                }
            }
        }
    }
    Ok(None)
}

/// Taut foliation existence for `ν = 3`: `e_0 = -1` asks realizability of
/// `ω_i/α_i`, `e_0 = -2` of `(α_i - ω_i)/α_i`, `e_0 ≤ -3` never.
pub fn foliation_criterion(sd: &SeifertData) -> Result<bool, SeifertError> {
    if sd.nu() != 3 {
        return Err(SeifertError::WrongLegCount(sd.nu()));
    }
    if sd.e0 >= 0 {
        return Err(SeifertError::Invariant("e0 must be negative".into()));
    }
    let vals: Vec<BigRational> = match sd.e0 {
        -1 => sd.legs.iter().map(|&(a, w)| ratio(w, a)).collect(),
        -2 => sd.legs.iter().map(|&(a, w)| ratio(a - w, a)).collect(),
        _ => return Ok(false),
    };
    Ok(realizable([&vals[0], &vals[1], &vals[2]])?.is_some())
}

fn pairwise_coprime(xs: &[i64]) -> bool {
    xs.iter().all(|&x| x >= 2)
        && xs.iter().enumerate().all(|(i, a)| xs[i + 1..].iter().all(|b| a.gcd(b) == 1))
}

/// Invariants of `Σ(p,q,r)` by exhaustive search over `ω`: requires
/// `e_0 pqr + Σ ω_i pqr/α_i = -1` with `e_0 ≤ -1`, checked by `det = 1`.
pub fn brieskorn_seifert(p: i64, q: i64, r: i64) -> Result<SeifertData, SeifertError> {
    if !pairwise_coprime(&[p, q, r]) {
        return Err(SeifertError::Brieskorn);
    }
    let n = p as i128 * q as i128 * r as i128;
    for w1 in 1..p {
        for w2 in 1..q {
            for w3 in 1..r {
                let s = w1 as i128 * (q * r) as i128 + w2 as i128 * (p * r) as i128 + w3 as i128 * (p * q) as i128;
                let num = -1 - s;
                if num % n != 0 {
                    continue;
                }
                let e0 = (num / n) as i64;
                if e0 > -1 {
                    continue;
                }
                let sd = SeifertData::new(e0, vec![(p, w1), (q, w2), (r, w3)])?;
                if determinant(&seifert_to_graph(&sd)?) != rat(1) {
                    return Err(SeifertError::Inconsistent(format!("det of {sd} is not 1")));
                }
                return Ok(sd);
            }
        }
    }
    Err(SeifertError::SearchFailed)
}

/// Rationality of the double branched cover of `T(m,n)`: `1/2 + 1/m + 1/n > 1`.
/// When `Σ(2,m,n)` exists, cross-checked against the Laufer test.
pub fn brieskorn_cover_rational(m: i64, n: i64) -> Result<bool, SeifertError> {
    if m < 2 || n < 2 {
        return Err(SeifertError::Brieskorn);
    }
    let rational = ratio(1, 2) + ratio(1, m) + ratio(1, n) > rat(1);
    if pairwise_coprime(&[2, m, n]) {
        let g = seifert_to_graph(&brieskorn_seifert(2, m, n)?)?;
        if is_rational_fast(&g)? != rational {
            return Err(SeifertError::Inconsistent(format!("T({m},{n}) cover rationality")));
        }
    }
    Ok(rational)
}

/// Whether the graph is star-shaped with `ν = 3`, with its data if so.
pub fn three_legged(g: &PlumbingGraph) -> Option<SeifertData> {
    star_to_seifert(g).ok().filter(|sd| sd.nu() == 3)
}

impl SeifertData {
    /// `|H_1|` of the link, `|e| · Π α_i`.
    pub fn homology_order(&self) -> BigRational {
        let prod: i64 = self.legs.iter().map(|&(a, _)| a).product();
        orbifold_euler(self).abs() * rat(prod)
    }

    pub fn is_homology_sphere(&self) -> bool {
        let h = self.homology_order();
        !h.is_zero() && h == rat(1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{e8, sigma_2_3_7};
    use crate::graph::is_isomorphic;
    use crate::laufer::is_rational;

    #[test]
    fn reads_stars() {
        let sd = star_to_seifert(&e8()).unwrap();
        assert_eq!(sd, SeifertData { e0: -2, legs: vec![(2, 1), (3, 2), (5, 4)] });
        let sd = star_to_seifert(&sigma_2_3_7()).unwrap();
        assert_eq!(sd, SeifertData { e0: -1, legs: vec![(2, 1), (3, 1), (7, 1)] });
        assert_eq!(orbifold_euler(&sd), ratio(-1, 42));
        assert!(sd.is_homology_sphere());
        assert!(star_to_seifert(&crate::fixtures::path(3, -2)).is_err());
    }

    #[test]
    fn round_trip() {
        for g in [e8(), sigma_2_3_7()] {
            let sd = star_to_seifert(&g).unwrap();
            let back = seifert_to_graph(&sd).unwrap();
            assert!(is_isomorphic(&g, &back).is_some());
            assert_eq!(star_to_seifert(&back).unwrap(), sd);
        }
        assert!(SeifertData::new(-1, vec![(4, 2)]).is_err());
        assert!(seifert_to_graph(&SeifertData { e0: -1, legs: vec![(2, 1), (3, 1)] }).is_err());
    }

    #[test]
    fn pinkham() {
        let sd = star_to_seifert(&sigma_2_3_7()).unwrap();
        assert_eq!(pinkham_nonrational(&sd).unwrap(), (true, Some(1)));
        let sd = star_to_seifert(&e8()).unwrap();
        assert_eq!(pinkham_nonrational(&sd).unwrap(), (false, None));
        let pos = SeifertData::new(-1, vec![(2, 1), (3, 1), (5, 1)]).unwrap();
        assert!(pinkham_nonrational(&pos).is_err());
    }

    #[test]
    fn realizability() {
        let (x, y, z) = (ratio(1, 2), ratio(1, 3), ratio(1, 7));
        let r = realizable([&x, &y, &z]).unwrap().unwrap();
        assert_eq!((r.m, r.a), (5, 3));
        let big = ratio(9, 10);
        assert!(realizable([&big, &big, &big]).unwrap().is_none());
        let sd = star_to_seifert(&sigma_2_3_7()).unwrap();
        assert!(foliation_criterion(&sd).unwrap());
        let sd = star_to_seifert(&e8()).unwrap();
        assert!(!foliation_criterion(&sd).unwrap());
        let deep = SeifertData::new(-3, vec![(2, 1), (3, 1), (7, 1)]).unwrap();
        assert!(!foliation_criterion(&deep).unwrap());
    }

    #[test]
    fn brieskorn() {
        assert_eq!(brieskorn_seifert(2, 3, 5).unwrap(), SeifertData { e0: -2, legs: vec![(2, 1), (3, 2), (5, 4)] });
        assert_eq!(brieskorn_seifert(2, 3, 7).unwrap(), SeifertData { e0: -1, legs: vec![(2, 1), (3, 1), (7, 1)] });
        assert!(brieskorn_seifert(2, 4, 5).is_err());
        assert!(brieskorn_cover_rational(3, 5).unwrap());
        assert!(!brieskorn_cover_rational(3, 7).unwrap());
        assert!(!brieskorn_cover_rational(4, 4).unwrap());
        assert!(is_rational(&seifert_to_graph(&brieskorn_seifert(2, 3, 5).unwrap()).unwrap()).unwrap().rational);
    }
}
