//! The unoriented layer: semimatroids, their flats, and geometric
//! semilattices.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde_json::{json, Map, Value};

use crate::axioms::is_aom;
use crate::error::{Error, Result};
use crate::poset::{flats, RankedPoset};
use crate::sign::{ElemSet, SignVector};
use crate::system::{GroundSet, SignSystem};

/// Largest facet whose subsets are enumerated.
const MAX_FACET: usize = 20;

/// Outcome of one exhaustively checked rule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleReport {
    pub rule: &'static str,
    pub holds: bool,
    pub witness: Option<String>,
}

impl RuleReport {
    pub fn new(rule: &'static str, witness: Option<String>) -> RuleReport {
        RuleReport {
            rule,
            holds: witness.is_none(),
            witness,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({ "rule": self.rule, "holds": self.holds, "witness": self.witness })
    }
}

pub fn all_hold(reports: &[RuleReport]) -> bool {
    reports.iter().all(|r| r.holds)
}

/// A finite semimatroid `(E, 𝒞, rk)`; `rank` is keyed by the central sets.
#[derive(Clone, Debug, PartialEq)]
pub struct Semimatroid {
    ground: Arc<GroundSet>,
    rank: BTreeMap<ElemSet, usize>,
}

impl Semimatroid {
    /// `rank` must be defined on a nonempty, downward closed family.
    pub fn new(ground: Arc<GroundSet>, rank: BTreeMap<ElemSet, usize>) -> Result<Semimatroid> {
        if rank.is_empty() {
            return Err(Error::Precondition(
                "semimatroid needs a central set".into(),
            ));
        }
        for a in rank.keys() {
            if a.universe() != ground.len() {
                return Err(Error::GroundMismatch {
                    left: a.universe(),
                    right: ground.len(),
                });
            }
            for e in a.iter() {
                let mut b = a.clone();
                b.remove(e);
                if !rank.contains_key(&b) {
                    return Err(Error::Precondition(format!(
                        "central sets are not downward closed at {{{}}}",
                        ground.label(a)
                    )));
                }
            }
        }
        Ok(Semimatroid { ground, rank })
    }

    /// Central sets are subsets of members of `lattice`; the rank of `A` is
    /// the rank of the smallest member containing it.
    pub fn from_semilattice(ground: Arc<GroundSet>, lattice: &[ElemSet]) -> Result<Semimatroid> {
        let p = inclusion_poset(&ground, lattice)?;
        let mut rank = BTreeMap::new();
        for f in lattice {
            if f.count() > MAX_FACET {
                return Err(Error::TooLarge(format!("flat with {} elements", f.count())));
            }
            for a in subsets(f) {
                if rank.contains_key(&a) {
                    continue;
                }
                let above: Vec<usize> = (0..lattice.len())
                    .filter(|&j| a.is_subset(&lattice[j]))
                    .collect();
                let least = above
                    .iter()
                    .copied()
                    .find(|&j| above.iter().all(|&k| p.leq(j, k)))
                    .ok_or_else(|| {
                        Error::Precondition(format!(
                            "no least member contains {{{}}}",
                            ground.label(&a)
                        ))
                    })?;
                rank.insert(a, p.rank(least));
            }
        }
        Semimatroid::new(ground, rank)
    }

    pub fn ground(&self) -> &Arc<GroundSet> {
        &self.ground
    }

    pub fn is_central(&self, a: &ElemSet) -> bool {
        self.rank.contains_key(a)
    }

    pub fn central_sets(&self) -> impl Iterator<Item = &ElemSet> {
        self.rank.keys()
    }

    pub fn rank_of(&self, a: &ElemSet) -> Option<usize> {
        self.rank.get(a).copied()
    }

    /// Overwrites one rank value; useful for building counterexamples.
    pub fn set_rank(&mut self, a: &ElemSet, r: usize) -> Result<()> {
        match self.rank.get_mut(a) {
            Some(v) => {
                *v = r;
                Ok(())
            }
            None => Err(Error::Precondition("set is not central".into())),
        }
    }

    /// Rank of the whole semimatroid.
    pub fn rank(&self) -> usize {
        self.rank.values().copied().max().unwrap_or(0)
    }

    /// Maximal central sets.
    pub fn facets(&self) -> Vec<ElemSet> {
        let sets: Vec<&ElemSet> = self.rank.keys().collect();
        sets.iter()
            .filter(|a| !sets.iter().any(|b| b.count() > a.count() && a.is_subset(b)))
            .map(|a| (*a).clone())
            .collect()
    }

    pub fn closure(&self, x: &ElemSet) -> Result<ElemSet> {
        let r = self.rank_of(x).ok_or_else(|| {
            Error::Precondition(format!("{{{}}} is not central", self.ground.label(x)))
        })?;
        let mut out = ElemSet::empty(self.ground.len());
        for e in 0..self.ground.len() {
            let mut y = x.clone();
            y.insert(e);
            if self.rank_of(&y) == Some(r) {
                out.insert(e);
            }
        }
        Ok(out)
    }

    pub fn flats(&self) -> Vec<ElemSet> {
        let mut f: Vec<ElemSet> = self
            .rank
            .keys()
            .filter(|a| self.closure(a).ok().as_ref() == Some(*a))
            .cloned()
            .collect();
        f.sort();
        f
    }

    pub fn is_basis(&self, b: &ElemSet) -> bool {
        self.rank_of(b) == Some(b.count()) && b.count() == self.rank()
    }

    /// Checks R1, R2, R3, CR1 and CR2 over all pairs of central sets.
    pub fn check(&self) -> Vec<RuleReport> {
        let sets: Vec<(&ElemSet, usize)> = self.rank.iter().map(|(a, &r)| (a, r)).collect();
        let lbl = |a: &ElemSet| format!("{{{}}}", self.ground.label(a));
        let r1 = sets
            .iter()
            .find(|(a, r)| *r > a.count())
            .map(|(a, r)| format!("rk{} = {r}", lbl(a)));
        let mut r2 = None;
        let mut r3 = None;
        let mut cr1 = None;
        let mut cr2 = None;
        for &(x, rx) in &sets {
            for &(y, ry) in &sets {
                if r2.is_none() && x.is_subset(y) && rx > ry {
                    r2 = Some(format!("{} ⊆ {} but rk {rx} > {ry}", lbl(x), lbl(y)));
                }
                let u = x.union(y);
                let i = x.intersection(y);
                let ri = self.rank[&i];
                if r3.is_none() {
                    if let Some(ru) = self.rank_of(&u) {
                        if rx + ry < ru + ri {
                            r3 = Some(format!("X = {}, Y = {}", lbl(x), lbl(y)));
                        }
                    }
                }
                if cr1.is_none() && rx == ri && !self.is_central(&u) {
                    cr1 = Some(format!("X = {}, Y = {}", lbl(x), lbl(y)));
                }
                if cr2.is_none() && rx < ry {
                    let ok = y.difference(x).iter().any(|e| {
                        let mut z = x.clone();
                        z.insert(e);
                        self.is_central(&z)
                    });
                    if !ok {
                        cr2 = Some(format!("X = {}, Y = {}", lbl(x), lbl(y)));
                    }
                }
            }
        }
        vec![
            RuleReport::new("R1", r1),
            RuleReport::new("R2", r2),
            RuleReport::new("R3", r3),
            RuleReport::new("CR1", cr1),
            RuleReport::new("CR2", cr2),
        ]
    }

    pub fn to_json(&self) -> Value {
        let names = |a: &ElemSet| {
            a.iter()
                .map(|e| self.ground.name(e).to_string())
                .collect::<Vec<_>>()
        };
        let mut rank = Map::new();
        for (a, &r) in &self.rank {
            rank.insert(self.ground.label(a), json!(r));
        }
        json!({
            "ground": self.ground.names(),
            "facets": self.facets().iter().map(names).collect::<Vec<_>>(),
            "rank": rank,
        })
    }
}

fn subsets(f: &ElemSet) -> Vec<ElemSet> {
    let elems = f.to_vec();
    (0u64..1 << elems.len())
        .map(|mask| {
            ElemSet::from_indices(
                f.universe(),
                elems
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &e)| e),
            )
        })
        .collect()
}

fn inclusion_poset(ground: &GroundSet, family: &[ElemSet]) -> Result<RankedPoset> {
    let labels = family
        .iter()
        .map(|a| format!("{{{}}}", ground.label(a)))
        .collect();
    RankedPoset::from_relation(labels, |i, j| family[i].is_subset(&family[j]))
}

/// The semimatroid of central sets of a system, without checking that the
/// system is an affine oriented matroid.
pub fn underlying_semimatroid_unchecked(s: &SignSystem) -> Result<Semimatroid> {
    Semimatroid::from_semilattice(s.ground().clone(), &flats(s))
}

pub fn underlying_semimatroid(s: &SignSystem) -> Result<Semimatroid> {
    if !is_aom(s) {
        return Err(Error::Precondition(
            "system is not an affine oriented matroid".into(),
        ));
    }
    underlying_semimatroid_unchecked(s)
}

/// Rank of a system: the length of its poset of flats.
pub fn system_rank(s: &SignSystem) -> usize {
    if s.is_empty() {
        return 0;
    }
    crate::poset::flats_poset(s).length()
}

/// The unique covector vanishing on the basis `b`.
pub fn basis_max_covector(s: &SignSystem, b: &ElemSet) -> Result<SignVector> {
    let m = underlying_semimatroid_unchecked(s)?;
    if !m.is_basis(b) {
        return Err(Error::Precondition(format!(
            "{{{}}} is not a basis",
            s.ground().label(b)
        )));
    }
    let hits: Vec<&SignVector> = s.iter().filter(|x| b.is_subset(&x.zero_set())).collect();
    match hits.as_slice() {
        [x] => Ok((*x).clone()),
        _ => Err(Error::Precondition(format!(
            "{} covectors vanish on the basis",
            hits.len()
        ))),
    }
}

/// A family of sets ordered by inclusion, tested as a geometric semilattice.
pub struct SetSemilattice {
    sets: Vec<ElemSet>,
    poset: RankedPoset,
}

impl SetSemilattice {
    pub fn new(ground: &GroundSet, sets: Vec<ElemSet>) -> Result<SetSemilattice> {
        let poset = inclusion_poset(ground, &sets)?;
        Ok(SetSemilattice { sets, poset })
    }

    pub fn sets(&self) -> &[ElemSet] {
        &self.sets
    }

    pub fn poset(&self) -> &RankedPoset {
        &self.poset
    }

    /// Least upper bound of `xs`, if one exists.
    pub fn join(&self, xs: &[usize]) -> Option<usize> {
        let ups: Vec<usize> = (0..self.sets.len())
            .filter(|&u| xs.iter().all(|&x| self.poset.leq(x, u)))
            .collect();
        ups.iter()
            .copied()
            .find(|&u| ups.iter().all(|&v| self.poset.leq(u, v)))
    }

    fn meet(&self, a: usize, b: usize) -> Option<usize> {
        let downs: Vec<usize> = (0..self.sets.len())
            .filter(|&d| self.poset.leq(d, a) && self.poset.leq(d, b))
            .collect();
        downs
            .iter()
            .copied()
            .find(|&d| downs.iter().all(|&v| self.poset.leq(v, d)))
    }

    fn atoms(&self) -> Vec<usize> {
        (0..self.sets.len())
            .filter(|&i| self.poset.rank(i) == 1)
            .collect()
    }

    /// Ranked with a least element, meets equal intersections, GSL1 and GSL2.
    pub fn check(&self) -> Vec<RuleReport> {
        let p = &self.poset;
        let n = self.sets.len();
        let lbl = |i: usize| p.label(i).to_string();
        let ranked = if n == 0 {
            Some("empty family".to_string())
        } else if p.bottom().is_none() {
            Some("no least element".to_string())
        } else if !p.is_graded() {
            Some("not graded".to_string())
        } else {
            None
        };
        if ranked.is_some() {
            return vec![RuleReport::new("ranked", ranked)];
        }
        let mut meets = None;
        'outer: for a in 0..n {
            for b in a + 1..n {
                match self.meet(a, b) {
                    Some(m) if self.sets[m] == self.sets[a].intersection(&self.sets[b]) => {}
                    _ => {
                        meets = Some(format!("{} ∧ {}", lbl(a), lbl(b)));
                        break 'outer;
                    }
                }
            }
        }
        let gsl1 = p
            .maximal()
            .into_iter()
            .find_map(|top| self.lower_interval_defect(top));
        let gsl2 = self.gsl2_witness();
        vec![
            RuleReport::new("ranked", None),
            RuleReport::new("meets", meets),
            RuleReport::new("GSL1", gsl1),
            RuleReport::new("GSL2", gsl2),
        ]
    }

    /// Why `[0̂, top]` is not a geometric lattice, if it is not.
    fn lower_interval_defect(&self, top: usize) -> Option<String> {
        let p = &self.poset;
        let inside: Vec<usize> = p.down_set(top).to_vec();
        let join_in = |xs: &[usize]| -> Option<usize> {
            let ups: Vec<usize> = inside
                .iter()
                .copied()
                .filter(|&u| xs.iter().all(|&x| p.leq(x, u)))
                .collect();
            ups.iter()
                .copied()
                .find(|&u| ups.iter().all(|&v| p.leq(u, v)))
        };
        for &x in &inside {
            let atoms: Vec<usize> = inside
                .iter()
                .copied()
                .filter(|&a| p.rank(a) == 1 && p.leq(a, x))
                .collect();
            let j = if atoms.is_empty() {
                p.bottom()
            } else {
                join_in(&atoms)
            };
            if j != Some(x) {
                return Some(format!("{} is not a join of atoms", p.label(x)));
            }
        }
        for &a in &inside {
            for &b in &inside {
                let (Some(j), Some(m)) = (join_in(&[a, b]), self.meet(a, b)) else {
                    return Some(format!("{} and {} lack a join", p.label(a), p.label(b)));
                };
                if p.rank(a) + p.rank(b) < p.rank(j) + p.rank(m) {
                    return Some(format!(
                        "rank is not semimodular at {} and {}",
                        p.label(a),
                        p.label(b)
                    ));
                }
            }
        }
        None
    }

    fn gsl2_witness(&self) -> Option<String> {
        let p = &self.poset;
        let atoms = self.atoms();
        let max_rank = p.length();
        let mut stack: Vec<Vec<usize>> = vec![Vec::new()];
        while let Some(a) = stack.pop() {
            if !a.is_empty() {
                let Some(j) = self.join(&a) else { continue };
                if p.rank(j) != a.len() {
                    continue;
                }
                for x in 0..self.sets.len() {
                    if p.rank(x) >= p.rank(j) {
                        continue;
                    }
                    let ok = a
                        .iter()
                        .any(|&at| !p.leq(at, x) && self.join(&[x, at]).is_some());
                    if !ok {
                        let names: Vec<String> =
                            a.iter().map(|&i| p.label(i).to_string()).collect();
                        return Some(format!("A = [{}], x = {}", names.join(", "), p.label(x)));
                    }
                }
            }
            if a.len() < max_rank {
                let start = a
                    .last()
                    .map_or(0, |&l| atoms.iter().position(|&t| t == l).unwrap() + 1);
                for &t in &atoms[start..] {
                    let mut b = a.clone();
                    b.push(t);
                    if self.join(&b).is_some() {
                        stack.push(b);
                    }
                }
            }
        }
        None
    }
}

/// Semilattice → semimatroid → flats; returns the semimatroid and whether
/// the flats coincide with the input family.
pub fn cryptomorphism_roundtrip(
    ground: Arc<GroundSet>,
    lattice: &[ElemSet],
) -> Result<(Semimatroid, bool)> {
    let l = SetSemilattice::new(&ground, lattice.to_vec())?;
    if let Some(bad) = l.check().into_iter().find(|r| !r.holds) {
        return Err(Error::Precondition(format!(
            "{} fails: {}",
            bad.rule,
            bad.witness.unwrap_or_default()
        )));
    }
    let m = Semimatroid::from_semilattice(ground, lattice)?;
    let mut want = lattice.to_vec();
    want.sort();
    let same = m.flats() == want;
    Ok((m, same))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::realize::examples::{four_lines, full_system};
    use crate::realize::DEFAULT_SEED;

    fn fig() -> SignSystem {
        four_lines().covectors(DEFAULT_SEED).unwrap()
    }

    fn set(s: &SignSystem, names: &[&str]) -> ElemSet {
        s.ground().set_of(names).unwrap()
    }

    #[test]
    fn four_lines_semimatroid() {
        let s = fig();
        let m = underlying_semimatroid(&s).unwrap();
        assert!(all_hold(&m.check()));
        let facets: Vec<String> = m.facets().iter().map(|f| s.ground().label(f)).collect();
        assert_eq!(facets.len(), 3);
        assert!(facets.contains(&"H1,H2,H3".to_string()));
        assert_eq!(m.rank(), 2);
        assert_eq!(
            m.closure(&set(&s, &["H1", "H2"])).unwrap(),
            set(&s, &["H1", "H2", "H3"])
        );
        assert_eq!(m.closure(&ElemSet::empty(4)).unwrap(), ElemSet::empty(4));
        assert!(m.closure(&set(&s, &["H3", "H4"])).is_err());
    }

    #[test]
    fn tampered_rank_is_caught() {
        let s = fig();
        let mut m = underlying_semimatroid(&s).unwrap();
        m.set_rank(&set(&s, &["H1", "H2", "H3"]), 3).unwrap();
        let r = m.check();
        assert!(r[0].holds);
        assert!(!r[2].holds || !r[4].holds);
    }

    #[test]
    fn free_matroid() {
        let g = Arc::new(GroundSet::numbered(3));
        let rank = subsets(&ElemSet::full(3)).into_iter().map(|a| {
            let c = a.count();
            (a, c)
        });
        let m = Semimatroid::new(g, rank.collect()).unwrap();
        assert!(all_hold(&m.check()));
        assert_eq!(m.flats().len(), 8);
    }

    #[test]
    fn semilattice_checks() {
        let s = fig();
        let l = SetSemilattice::new(s.ground(), flats(&s)).unwrap();
        assert!(all_hold(&l.check()));
        // Two parallel hyperplanes: {∅, {a}, {b}}.
        let g = Arc::new(GroundSet::new(["a", "b"]).unwrap());
        let fam = vec![
            ElemSet::empty(2),
            ElemSet::from_indices(2, [0]),
            ElemSet::from_indices(2, [1]),
        ];
        let (m, same) = cryptomorphism_roundtrip(g, &fam).unwrap();
        assert!(same);
        assert!(!m.is_central(&ElemSet::full(2)));
        // A three-element chain of sets is not atomic.
        let g = GroundSet::numbered(2);
        let fam = vec![
            ElemSet::empty(2),
            ElemSet::from_indices(2, [0]),
            ElemSet::full(2),
        ];
        let l = SetSemilattice::new(&g, fam).unwrap();
        assert!(!all_hold(&l.check()));
    }

    #[test]
    fn roundtrips() {
        let s = fig();
        let (_, same) = cryptomorphism_roundtrip(s.ground().clone(), &flats(&s)).unwrap();
        assert!(same);
        let b2 = full_system(2);
        let (m, same) = cryptomorphism_roundtrip(b2.ground().clone(), &flats(&b2)).unwrap();
        assert!(same);
        assert!(m.is_central(&ElemSet::full(2)));
    }

    #[test]
    fn basis_covectors() {
        let s = fig();
        let x = basis_max_covector(&s, &set(&s, &["H1", "H2"])).unwrap();
        assert_eq!(x.zero_set(), set(&s, &["H1", "H2", "H3"]));
        let y = basis_max_covector(&s, &set(&s, &["H1", "H4"])).unwrap();
        assert_eq!(y.zero_set(), set(&s, &["H1", "H4"]));
        assert!(basis_max_covector(&s, &set(&s, &["H1"])).is_err());
        let f = full_system(2);
        assert_eq!(
            basis_max_covector(&f, &ElemSet::full(2)).unwrap(),
            SignVector::parse("00").unwrap()
        );
    }

    #[test]
    fn json_shape() {
        let s = fig();
        let v = underlying_semimatroid(&s).unwrap().to_json();
        assert_eq!(v["rank"]["H1,H2,H3"], 2);
        assert_eq!(v["rank"][""], 0);
    }
}
