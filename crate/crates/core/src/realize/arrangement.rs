//! Finite arrangements of rational affine hyperplanes and their covectors.

use std::collections::{HashSet, VecDeque};
use std::sync::Arc;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::lp::{feasible_point, Constraint, Rel};
use crate::error::{Error, Result};
use crate::rational::{dot, rank, solve, RowSpace, Q};
use crate::sign::{Sign, SignVector};
use crate::system::{GroundSet, SignSystem};

/// Seed used for generic-point perturbation unless overridden.
pub const DEFAULT_SEED: u64 = 0x5eed_0f_a0b5;

/// `{x : <normal, x> = offset}`, positive side `<normal, x> > offset`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalHyperplane {
    pub name: String,
    pub normal: Vec<Q>,
    pub offset: Q,
}

impl RationalHyperplane {
    pub fn new(name: impl Into<String>, normal: Vec<Q>, offset: Q) -> RationalHyperplane {
        RationalHyperplane {
            name: name.into(),
            normal,
            offset,
        }
    }

    pub fn value_at(&self, x: &[Q]) -> Q {
        dot(&self.normal, x) - &self.offset
    }

    pub fn sign_at(&self, x: &[Q]) -> Sign {
        Sign::from_ordering(self.value_at(x).cmp(&Q::zero()))
    }

    /// Row `[normal | offset]`, the affine functional up to sign.
    pub fn row(&self) -> Vec<Q> {
        let mut r = self.normal.clone();
        r.push(self.offset.clone());
        r
    }

    /// Same point set (possibly with opposite orientation).
    pub fn coincides_with(&self, other: &RationalHyperplane) -> bool {
        rank(&[self.row(), other.row()]) == 1
    }

    pub fn is_parallel_to(&self, other: &RationalHyperplane) -> bool {
        rank(&[self.normal.clone(), other.normal.clone()]) == 1
    }
}

#[derive(Clone, Debug)]
pub struct FiniteArrangement {
    dim: usize,
    hyperplanes: Vec<RationalHyperplane>,
}

impl FiniteArrangement {
    /// Rejects zero normals, wrong dimensions, repeated names and coincident
    /// hyperplanes.
    pub fn new(dim: usize, hyperplanes: Vec<RationalHyperplane>) -> Result<FiniteArrangement> {
        for h in &hyperplanes {
            if h.normal.len() != dim {
                return Err(Error::Degenerate(format!(
                    "hyperplane {} has {} coordinates, expected {dim}",
                    h.name,
                    h.normal.len()
                )));
            }
            if h.normal.iter().all(Zero::is_zero) {
                return Err(Error::Degenerate(format!(
                    "hyperplane {} has zero normal",
                    h.name
                )));
            }
        }
        GroundSet::new(hyperplanes.iter().map(|h| h.name.clone()))?;
        for (i, a) in hyperplanes.iter().enumerate() {
            for b in &hyperplanes[i + 1..] {
                if a.coincides_with(b) {
                    return Err(Error::Degenerate(format!(
                        "hyperplanes {} and {} coincide",
                        a.name, b.name
                    )));
                }
            }
        }
        Ok(FiniteArrangement { dim, hyperplanes })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn hyperplanes(&self) -> &[RationalHyperplane] {
        &self.hyperplanes
    }

    pub fn len(&self) -> usize {
        self.hyperplanes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hyperplanes.is_empty()
    }

    pub fn ground(&self) -> GroundSet {
        GroundSet::new(self.hyperplanes.iter().map(|h| h.name.clone())).expect("checked names")
    }

    pub fn sign_vector_at(&self, x: &[Q]) -> SignVector {
        let signs: Vec<Sign> = self.hyperplanes.iter().map(|h| h.sign_at(x)).collect();
        SignVector::from_signs(&signs)
    }

    /// The cell of `x` as strict inequalities and equations.
    pub fn constraints_for(&self, x: &SignVector) -> Vec<Constraint> {
        self.hyperplanes
            .iter()
            .enumerate()
            .map(|(i, h)| {
                let (coeffs, constant) = match x.get(i) {
                    Sign::Minus => (h.normal.iter().map(|v| -v).collect(), h.offset.clone()),
                    _ => (h.normal.clone(), -h.offset.clone()),
                };
                let rel = match x.get(i) {
                    Sign::Zero => Rel::Eq,
                    _ => Rel::Gt,
                };
                Constraint::new(coeffs, constant, rel)
            })
            .collect()
    }

    /// A point whose sign vector is exactly `x`, if the cell is nonempty.
    pub fn cell_point(&self, x: &SignVector) -> Option<Vec<Q>> {
        feasible_point(self.dim, &self.constraints_for(x))
    }

    pub fn is_covector(&self, x: &SignVector) -> bool {
        self.cell_point(x).is_some()
    }

    /// Rank of the normals of `set` if the hyperplanes in it have a common
    /// point, `None` otherwise.
    pub fn intersection_rank(&self, set: &[usize]) -> Option<usize> {
        let a: Vec<Vec<Q>> = set
            .iter()
            .map(|&i| self.hyperplanes[i].normal.clone())
            .collect();
        let b: Vec<Q> = set
            .iter()
            .map(|&i| self.hyperplanes[i].offset.clone())
            .collect();
        if set.is_empty() {
            return Some(0);
        }
        solve(&a, &b).map(|_| rank(&a))
    }

    /// A point on no hyperplane, near the origin, derived from `seed`.
    pub fn generic_point(&self, seed: u64) -> Vec<Q> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        loop {
            let x: Vec<Q> = (0..self.dim)
                .map(|_| {
                    let den: i64 = rng.gen_range(97..1009);
                    let num: i64 = rng.gen_range(-den..=den);
                    Q::new(num.into(), den.into())
                })
                .collect();
            if self.hyperplanes.iter().all(|h| !h.value_at(&x).is_zero()) {
                return x;
            }
        }
    }

    /// All covectors, found by walking the tope graph across walls and then
    /// descending through facets; every candidate is confirmed by an exact
    /// feasibility check.
    pub fn covectors(&self, seed: u64) -> Result<SignSystem> {
        let ground = Arc::new(self.ground());
        let n = self.len();
        if n == 0 {
            return SignSystem::new(ground, [SignVector::zero(0)]);
        }
        let start = self.sign_vector_at(&self.generic_point(seed));
        let mut known: HashSet<SignVector> = HashSet::new();
        let mut rejected: HashSet<SignVector> = HashSet::new();
        let mut queue = VecDeque::from([start.clone()]);
        known.insert(start);
        while let Some(t) = queue.pop_front() {
            for e in 0..n {
                let facet = t.with(e, Sign::Zero);
                if rejected.contains(&facet) {
                    continue;
                }
                if !known.contains(&facet) {
                    if !self.is_covector(&facet) {
                        rejected.insert(facet);
                        continue;
                    }
                    known.insert(facet);
                }
                let across = t.with(e, -t.get(e));
                if known.insert(across.clone()) {
                    queue.push_back(across);
                }
            }
        }

        let rows: Vec<Vec<Q>> = self.hyperplanes.iter().map(|h| h.row()).collect();
        let mut stack: Vec<SignVector> = known.iter().cloned().collect();
        stack.sort();
        while let Some(x) = stack.pop() {
            let zero: Vec<usize> = x.zero_set().to_vec();
            for e in x.support().iter() {
                let mut span_rows: Vec<Vec<Q>> = zero.iter().map(|&i| rows[i].clone()).collect();
                span_rows.push(rows[e].clone());
                let span = RowSpace::new(&span_rows);
                let mut y = x.clone();
                for f in x.support().iter() {
                    if f == e || span.contains(&rows[f]) {
                        y.set(f, Sign::Zero);
                    }
                }
                if known.contains(&y) || rejected.contains(&y) {
                    continue;
                }
                if self.is_covector(&y) {
                    known.insert(y.clone());
                    stack.push(y);
                } else {
                    rejected.insert(y);
                }
            }
        }
        SignSystem::new(ground, known)
    }
}

/// Parses a closed box `"lo,hi;lo,hi"`.
pub fn parse_window(s: &str) -> Result<Vec<(Q, Q)>> {
    s.split(';')
        .map(|part| {
            let (lo, hi) = part
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("window axis {part:?} is not lo,hi")))?;
            let (lo, hi) = (crate::rational::parse_q(lo)?, crate::rational::parse_q(hi)?);
            if lo > hi {
                return Err(Error::Parse(format!("empty window axis {part:?}")));
            }
            Ok((lo, hi))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn h(name: &str, n: &[i64], b: i64) -> RationalHyperplane {
        RationalHyperplane::new(name, n.iter().map(|&x| q(x)).collect(), q(b))
    }

    #[test]
    fn two_crossing_lines_have_nine_covectors() {
        let a = FiniteArrangement::new(2, vec![h("x", &[1, 0], 0), h("y", &[0, 1], 0)]).unwrap();
        let l = a.covectors(DEFAULT_SEED).unwrap();
        assert_eq!(l.len(), 9);
    }

    #[test]
    fn three_concurrent_lines() {
        // Covectors: 1 vertex, 6 rays, 6 sectors.
        let a = FiniteArrangement::new(
            2,
            vec![h("a", &[1, 0], 0), h("b", &[0, 1], 0), h("c", &[1, 1], 0)],
        )
        .unwrap();
        let l = a.covectors(1).unwrap();
        assert_eq!(l.len(), 13);
        assert!(l.contains(&SignVector::parse("000").unwrap()));
    }

    #[test]
    fn result_does_not_depend_on_seed() {
        let a = FiniteArrangement::new(
            2,
            vec![
                h("a", &[1, 0], 0),
                h("b", &[0, 1], 1),
                h("c", &[1, 1], 3),
                h("d", &[1, -1], 0),
            ],
        )
        .unwrap();
        assert_eq!(a.covectors(1).unwrap(), a.covectors(99).unwrap());
    }

    #[test]
    fn rejects_coincident_and_zero() {
        assert!(FiniteArrangement::new(1, vec![h("a", &[1], 1), h("b", &[-2], -2)]).is_err());
        assert!(FiniteArrangement::new(1, vec![h("a", &[0], 1)]).is_err());
        assert!(FiniteArrangement::new(2, vec![h("a", &[1], 1)]).is_err());
    }

    #[test]
    fn window_parsing() {
        let w = parse_window("-1/4,5/4;0,1").unwrap();
        assert_eq!(w.len(), 2);
        assert!(parse_window("1,0").is_err());
    }

    #[test]
    fn intersection_rank_detects_empty_intersections() {
        let a = FiniteArrangement::new(
            2,
            vec![h("a", &[1, 0], 0), h("b", &[1, 0], 1), h("c", &[0, 1], 0)],
        )
        .unwrap();
        assert_eq!(a.intersection_rank(&[0, 1]), None);
        assert_eq!(a.intersection_rank(&[0, 2]), Some(2));
        assert_eq!(a.intersection_rank(&[]), Some(0));
    }
}
