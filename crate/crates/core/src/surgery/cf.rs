//! Negative continued fractions `[e_1, …, e_s] = e_1 - 1/(e_2 - 1/(…))` and
//! the strings of vertices they decorate.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::SurgeryError;
use crate::graph::{GraphError, PlumbingGraph, VertexId};

/// Expansion with `e_1 ≤ -1` and `e_i ≤ -2` for `i ≥ 2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContinuedFraction {
    pub value: BigRational,
    pub terms: Vec<BigInt>,
}

/// Expands a negative rational: `e_1 = ⌊r⌋`, then recurse on
/// `-1 / (r - ⌊r⌋)`, which is below `-1`.
pub fn negative_cf(r: &BigRational) -> Result<ContinuedFraction, SurgeryError> {
    if !r.is_negative() {
        return Err(SurgeryError::NonNegativeSlope(r.clone()));
    }
    let mut terms = Vec::new();
    let mut x = r.clone();
    loop {
        let floor = x.floor();
        terms.push(floor.to_integer());
        let frac = &x - &floor;
        if frac.is_zero() {
            break;
        }
        x = -frac.recip();
    }
    Ok(ContinuedFraction { value: r.clone(), terms })
}

/// Evaluates `[e_1, …, e_s]`; `None` when a partial denominator vanishes.
pub fn evaluate(terms: &[BigInt]) -> Option<BigRational> {
    let (last, rest) = terms.split_last()?;
    let mut acc = BigRational::from_integer(last.clone());
    for e in rest.iter().rev() {
        if acc.is_zero() {
            return None;
        }
        acc = BigRational::from_integer(e.clone()) - acc.recip();
    }
    Some(acc)
}

impl ContinuedFraction {
    /// Whether the sign constraints hold and the terms reproduce `value`.
    pub fn is_valid(&self) -> bool {
        let minus_one = -BigInt::one();
        let minus_two = BigInt::from(-2);
        let signs = self.terms.iter().enumerate().all(|(i, e)| {
            if i == 0 {
                *e <= minus_one
            } else {
                *e <= minus_two
            }
        });
        signs && evaluate(&self.terms).as_ref() == Some(&self.value)
    }
}

/// Fresh ids for `count` new vertices, unused in every graph of `taken`.
pub(crate) fn fresh_ids(count: usize, taken: &[&PlumbingGraph]) -> Vec<VertexId> {
    let mut out = Vec::with_capacity(count);
    let mut k: usize = taken.iter().map(|g| g.len()).sum();
    while out.len() < count {
        let id = VertexId::new(format!("{}{k}", crate::graph::FRESH_PREFIX)).unwrap();
        if !taken.iter().any(|g| g.contains(&id)) {
            out.push(id);
        }
        k += 1;
    }
    out
}

pub(crate) fn attach_string_avoiding(
    g: &PlumbingGraph,
    at: &VertexId,
    r: &BigRational,
    avoid: &[&PlumbingGraph],
) -> Result<(PlumbingGraph, Vec<VertexId>), SurgeryError> {
    if !g.contains(at) {
        return Err(GraphError::UnknownVertex(at.clone()).into());
    }
    let cf = negative_cf(r)?;
    let mut taken: Vec<&PlumbingGraph> = vec![g];
    taken.extend_from_slice(avoid);
    let ids = fresh_ids(cf.terms.len(), &taken);
    let mut out = g.clone();
    let mut prev = at.clone();
    for (id, e) in ids.iter().zip(&cf.terms) {
        out.add_vertex(id.clone(), BigRational::from_integer(e.clone()))?;
        out.add_edge(&prev, id)?;
        prev = id.clone();
    }
    Ok((out, ids))
}

/// Replaces a rational slope `r < 0` at `at` by the string decorated with
/// `negative_cf(r)`, its first vertex adjacent to `at`. Returns the new
/// graph and the string's ids in order.
pub fn attach_string(
    g: &PlumbingGraph,
    at: &VertexId,
    r: &BigRational,
) -> Result<(PlumbingGraph, Vec<VertexId>), SurgeryError> {
    attach_string_avoiding(g, at, r, &[])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, ratio};
    use crate::graph::vid;
    use crate::lattice::determinant;

    fn terms(cf: &ContinuedFraction) -> Vec<i64> {
        cf.terms.iter().map(|t| t.try_into().unwrap()).collect()
    }

    #[test]
    fn expansions() {
        assert_eq!(terms(&negative_cf(&rat(-3)).unwrap()), vec![-3]);
        assert_eq!(terms(&negative_cf(&ratio(-7, 2)).unwrap()), vec![-4, -2]);
        assert_eq!(terms(&negative_cf(&ratio(-1, 2)).unwrap()), vec![-1, -2]);
        assert_eq!(terms(&negative_cf(&ratio(-1, 3)).unwrap()), vec![-1, -2, -2]);
        for r in [rat(-3), ratio(-7, 2), ratio(-1, 2), ratio(-30, 7)] {
            assert!(negative_cf(&r).unwrap().is_valid());
        }
        assert!(matches!(negative_cf(&rat(0)), Err(SurgeryError::NonNegativeSlope(_))));
        assert!(negative_cf(&ratio(1, 2)).is_err());
    }

    #[test]
    fn evaluation() {
        let t = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        assert_eq!(evaluate(&t(&[-4, -2])), Some(ratio(-7, 2)));
        assert_eq!(evaluate(&t(&[-1, -2])), Some(ratio(-1, 2)));
        assert_eq!(evaluate(&t(&[])), None);
        assert_eq!(evaluate(&t(&[-1, 0])), None);
    }

    #[test]
    fn strings() {
        let g = PlumbingGraph::from_parts(&[("a", -2)], &[]);
        let (one, ids) = attach_string(&g, &vid("a"), &rat(-2)).unwrap();
        assert_eq!(ids.len(), 1);
        assert_eq!(one.weight(&ids[0]).unwrap(), &rat(-2));
        assert!(one.has_edge(&vid("a"), &ids[0]));

        let (semi, ids) = attach_string(&g, &vid("a"), &ratio(-1, 2)).unwrap();
        assert_eq!(semi.weight(&ids[0]).unwrap(), &rat(-1));
        assert_eq!(semi.weight(&ids[1]).unwrap(), &rat(-2));
        assert_eq!(determinant(&semi), rat(0));

        let (two, ids) = attach_string(&g, &vid("a"), &ratio(-7, 2)).unwrap();
        assert_eq!(two.weight(&ids[0]).unwrap(), &rat(-4));
        assert_eq!(two.weight(&ids[1]).unwrap(), &rat(-2));
        assert!(two.has_edge(&ids[0], &ids[1]));

        assert!(attach_string(&g, &vid("zz"), &rat(-2)).is_err());
    }
}
