//! Deletion, contraction, restriction, simplification and coning.

use std::collections::HashSet;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::sign::{ElemSet, Sign, SignVector};
use crate::system::{GroundSet, SignSystem};

fn complement_indices(s: &SignSystem, a: &ElemSet) -> Vec<usize> {
    (0..s.ground_len()).filter(|&i| !a.contains(i)).collect()
}

fn check_universe(s: &SignSystem, a: &ElemSet) -> Result<()> {
    if a.universe() != s.ground_len() {
        return Err(Error::GroundMismatch {
            left: s.ground_len(),
            right: a.universe(),
        });
    }
    Ok(())
}

/// `L \ A`: restrict every vector to `E \ A`.
pub fn delete(s: &SignSystem, a: &ElemSet) -> Result<SignSystem> {
    check_universe(s, a)?;
    let keep = complement_indices(s, a);
    let g = Arc::new(s.ground().subset(&keep));
    SignSystem::new(g, s.iter().map(|x| x.restrict(&keep)))
}

/// `L[A]`: keep only the elements of `A`.
pub fn restrict(s: &SignSystem, a: &ElemSet) -> Result<SignSystem> {
    check_universe(s, a)?;
    delete(s, &a.complement())
}

/// Some vector of the system vanishes on all of `a`.
pub fn is_central(s: &SignSystem, a: &ElemSet) -> bool {
    s.iter().any(|x| a.is_subset(&x.zero_set()))
}

/// `L / A`: vectors vanishing on `A`, restricted to `E \ A`.
///
/// The result is empty exactly when `A` is not central.
pub fn contract(s: &SignSystem, a: &ElemSet) -> Result<SignSystem> {
    check_universe(s, a)?;
    let keep = complement_indices(s, a);
    let g = Arc::new(s.ground().subset(&keep));
    SignSystem::new(
        g,
        s.iter()
            .filter(|x| a.is_subset(&x.zero_set()))
            .map(|x| x.restrict(&keep)),
    )
}

/// `(L \ D) / C` for disjoint `D` and `C`.
pub fn minor(s: &SignSystem, del: &ElemSet, con: &ElemSet) -> Result<SignSystem> {
    check_universe(s, del)?;
    check_universe(s, con)?;
    if let Some(e) = del.intersection(con).first() {
        return Err(Error::Overlap(s.ground().name(e).to_string()));
    }
    let c = contract(s, con)?;
    let keep = complement_indices(s, con);
    let del_c = ElemSet::from_indices(
        keep.len(),
        keep.iter()
            .enumerate()
            .filter(|(_, &i)| del.contains(i))
            .map(|(j, _)| j),
    );
    delete(&c, &del_c)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Removal {
    /// Constant over the whole system.
    Redundant,
    /// `X(e) = sign * X(f)` for every member, with `f` the kept element.
    Parallel { kept: usize, sign: Sign },
}

#[derive(Clone, Debug)]
pub struct Simplification {
    pub system: SignSystem,
    /// Original indices of the surviving elements.
    pub kept: Vec<usize>,
    /// Original index and reason for every removed element.
    pub removed: Vec<(usize, Removal)>,
}

fn column(s: &SignSystem, e: usize) -> Vec<Sign> {
    s.iter().map(|x| x.get(e)).collect()
}

/// Removes redundant elements and all but the first of each class of
/// elements whose columns agree up to a global sign.
pub fn simplify(s: &SignSystem) -> Simplification {
    let n = s.ground_len();
    let cols: Vec<Vec<Sign>> = (0..n).map(|e| column(s, e)).collect();
    let mut kept = Vec::new();
    let mut removed = Vec::new();
    for e in 0..n {
        let c = &cols[e];
        if c.windows(2).all(|w| w[0] == w[1]) {
            removed.push((e, Removal::Redundant));
            continue;
        }
        let neg: Vec<Sign> = c.iter().map(|&x| -x).collect();
        match kept.iter().find_map(|&f: &usize| {
            if cols[f] == *c {
                Some((f, Sign::Plus))
            } else if cols[f] == neg {
                Some((f, Sign::Minus))
            } else {
                None
            }
        }) {
            Some((f, sign)) => removed.push((e, Removal::Parallel { kept: f, sign })),
            None => kept.push(e),
        }
    }
    let g = Arc::new(s.ground().subset(&kept));
    let system = SignSystem::new(g, s.iter().map(|x| x.restrict(&kept))).expect("same lengths");
    Simplification {
        system,
        kept,
        removed,
    }
}

pub fn is_simple(s: &SignSystem) -> bool {
    simplify(s).removed.is_empty()
}

/// Strategy for finding the vectors `N` with `(±N) ∘ L ⊆ L`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DirectionSearch {
    /// Try every vector of `{-,0,+}^E`.
    Exhaustive,
    /// Extend prefixes one element at a time, pruning prefixes whose
    /// compositions already leave the projection of the system.
    Prefix,
    /// `Exhaustive` up to 12 elements, `Prefix` above.
    Auto,
}

fn is_direction(s: &SignSystem, n: &SignVector) -> bool {
    let m = -n;
    s.iter()
        .all(|x| s.contains(&n.compose(x)) && s.contains(&m.compose(x)))
}

fn all_vectors(n: usize) -> impl Iterator<Item = SignVector> {
    let total = 3usize.pow(n as u32);
    (0..total).map(move |mut k| {
        let mut v = SignVector::zero(n);
        for i in (0..n).rev() {
            v.set(
                i,
                match k % 3 {
                    0 => Sign::Minus,
                    1 => Sign::Zero,
                    _ => Sign::Plus,
                },
            );
            k /= 3;
        }
        v
    })
}

fn prefix_directions(s: &SignSystem) -> Vec<SignVector> {
    let n = s.ground_len();
    let projections: Vec<HashSet<SignVector>> = (0..=n)
        .map(|k| {
            let idx: Vec<usize> = (0..k).collect();
            s.iter().map(|x| x.restrict(&idx)).collect()
        })
        .collect();
    let restricted: Vec<Vec<SignVector>> = (0..=n)
        .map(|k| {
            let idx: Vec<usize> = (0..k).collect();
            let mut v: Vec<SignVector> = s.iter().map(|x| x.restrict(&idx)).collect();
            v.sort();
            v.dedup();
            v
        })
        .collect();
    let mut out = Vec::new();
    let mut stack = vec![SignVector::zero(0)];
    while let Some(p) = stack.pop() {
        let k = p.len();
        if k == n {
            out.push(p);
            continue;
        }
        for sign in [Sign::Plus, Sign::Zero, Sign::Minus] {
            let mut signs: Vec<Sign> = p.signs().collect();
            signs.push(sign);
            let q = SignVector::from_signs(&signs);
            let mq = -&q;
            let ok = restricted[k + 1].iter().all(|x| {
                projections[k + 1].contains(&q.compose(x))
                    && projections[k + 1].contains(&mq.compose(x))
            });
            if ok {
                stack.push(q);
            }
        }
    }
    out.sort();
    out
}

/// All `N` with `N ∘ L ⊆ L` and `(-N) ∘ L ⊆ L`, sorted canonically.
///
/// These are the vectors of the cone that vanish on the new element.
pub fn directions(s: &SignSystem, how: DirectionSearch) -> Vec<SignVector> {
    if s.is_empty() {
        return Vec::new();
    }
    let n = s.ground_len();
    let how = match how {
        DirectionSearch::Auto if n <= 12 => DirectionSearch::Exhaustive,
        DirectionSearch::Auto => DirectionSearch::Prefix,
        h => h,
    };
    match how {
        DirectionSearch::Exhaustive => all_vectors(n).filter(|v| is_direction(s, v)).collect(),
        _ => prefix_directions(s),
    }
}

fn fresh_name(g: &GroundSet) -> String {
    let mut name = "g".to_string();
    while g.index_of(&name).is_ok() {
        name.push('\'');
    }
    name
}

/// The cone `{(X,+)} ∪ {(-X,-)} ∪ {(N,0)}` on `E ∪ {g}`, with `g` last.
pub fn cone(s: &SignSystem) -> SignSystem {
    let n = s.ground_len();
    let mut names = s.ground().names().to_vec();
    names.push(fresh_name(s.ground()));
    let g = Arc::new(GroundSet::new(names).expect("fresh name"));
    let extend = |x: &SignVector, last: Sign| {
        let mut signs: Vec<Sign> = x.signs().collect();
        signs.push(last);
        debug_assert_eq!(signs.len(), n + 1);
        SignVector::from_signs(&signs)
    };
    let mut vs = Vec::new();
    for x in s.iter() {
        vs.push(extend(x, Sign::Plus));
        vs.push(extend(&-x, Sign::Minus));
    }
    for d in directions(s, DirectionSearch::Auto) {
        vs.push(extend(&d, Sign::Zero));
    }
    SignSystem::new(g, vs).expect("consistent lengths")
}

/// Recovers `L` as the vectors of the cone that are `+` on element `g`.
pub fn decone(o: &SignSystem, g: usize) -> Result<SignSystem> {
    if g >= o.ground_len() {
        return Err(Error::Precondition(format!("no element {g} to decone at")));
    }
    let keep: Vec<usize> = (0..o.ground_len()).filter(|&i| i != g).collect();
    let ground = Arc::new(o.ground().subset(&keep));
    SignSystem::new(
        ground,
        o.iter()
            .filter(|x| x.get(g) == Sign::Plus)
            .map(|x| x.restrict(&keep)),
    )
}

/// Members `X` with no nonzero direction `N ≤ X`; these are the covectors
/// of bounded faces.
pub fn bounded_faces(s: &SignSystem) -> Vec<SignVector> {
    let dirs: Vec<SignVector> = directions(s, DirectionSearch::Auto)
        .into_iter()
        .filter(|d| !d.is_zero())
        .collect();
    s.iter()
        .filter(|x| !dirs.iter().any(|d| d.leq(x)))
        .cloned()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axioms::{classify, is_aom};

    fn line() -> SignSystem {
        SignSystem::from_strings(&["a", "b"], &["++", "0+", "-+", "-0", "--"]).unwrap()
    }

    #[test]
    fn contraction_and_deletion_of_two_point_line() {
        let s = line();
        let a = s.ground().set_of(&["a"]).unwrap();
        let c = contract(&s, &a).unwrap();
        let v: Vec<String> = c.iter().map(|x| x.to_string()).collect();
        assert_eq!(v, ["+"]);
        let d = delete(&s, &a).unwrap();
        let v: Vec<String> = d.iter().map(|x| x.to_string()).collect();
        assert_eq!(v, ["-", "0", "+"]);
        let both = s.ground().set_of(&["a", "b"]).unwrap();
        assert!(contract(&s, &both).unwrap().is_empty());
        assert!(!is_central(&s, &both));
    }

    #[test]
    fn minor_rejects_overlap() {
        let s = line();
        let a = s.ground().set_of(&["a"]).unwrap();
        assert!(matches!(minor(&s, &a, &a), Err(Error::Overlap(_))));
    }

    #[test]
    fn cone_of_two_point_line_has_thirteen_members() {
        let s = line();
        let o = cone(&s);
        assert_eq!(o.len(), 13);
        let c = classify(&o);
        assert!(c.om);
        assert_eq!(decone(&o, 2).unwrap(), s);
    }

    #[test]
    fn direction_searches_agree() {
        let s = line();
        assert_eq!(
            directions(&s, DirectionSearch::Exhaustive),
            directions(&s, DirectionSearch::Prefix)
        );
        let d: Vec<String> = directions(&s, DirectionSearch::Prefix)
            .iter()
            .map(|x| x.to_string())
            .collect();
        assert_eq!(d, ["--", "00", "++"]);
    }

    #[test]
    fn bounded_faces_of_two_point_line() {
        let v: Vec<String> = bounded_faces(&line())
            .iter()
            .map(|x| x.to_string())
            .collect();
        assert_eq!(v, ["-0", "-+", "0+"]);
    }

    #[test]
    fn simplify_drops_parallel_and_redundant_columns() {
        // c = -a, d constant.
        let s = SignSystem::from_strings(&["a", "b", "c", "d"], &["+0-+", "0+0+", "-+++"]).unwrap();
        let r = simplify(&s);
        assert_eq!(r.kept, vec![0, 1]);
        assert_eq!(
            r.removed,
            vec![
                (
                    2,
                    Removal::Parallel {
                        kept: 0,
                        sign: Sign::Minus
                    }
                ),
                (3, Removal::Redundant)
            ]
        );
        assert!(is_simple(&r.system));
    }

    #[test]
    fn minors_of_line_stay_aom() {
        let s = line();
        for del in 0..4u32 {
            let d = ElemSet::from_indices(2, (0..2).filter(|i| del >> i & 1 == 1));
            assert!(is_aom(&delete(&s, &d).unwrap()));
        }
    }
}
