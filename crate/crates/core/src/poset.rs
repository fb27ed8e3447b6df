//! Finite posets built from sign systems: covectors, flats, topes and
//! quotients, with Möbius functions, characteristic polynomials and
//! thinness tests.

use std::collections::{BTreeMap, HashMap};

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::polynomial::Poly2;
use crate::sign::{ElemSet, SignVector};
use crate::system::SignSystem;

/// A finite poset with cover relation and rank function.
///
/// `rank(x)` is the length of the longest chain from a minimal element to
/// `x`; `is_graded` records whether every cover raises the rank by one.
#[derive(Clone, Debug)]
pub struct RankedPoset {
    labels: Vec<String>,
    up: Vec<ElemSet>,
    down: Vec<ElemSet>,
    covers: Vec<(usize, usize)>,
    rank: Vec<usize>,
    graded: bool,
}

impl RankedPoset {
    /// Builds the poset of `leq` on `labels.len()` elements, verifying that
    /// it is a partial order.
    pub fn from_relation(
        labels: Vec<String>,
        leq: impl Fn(usize, usize) -> bool,
    ) -> Result<RankedPoset> {
        let n = labels.len();
        let mut up = vec![ElemSet::empty(n); n];
        let mut down = vec![ElemSet::empty(n); n];
        for i in 0..n {
            for j in 0..n {
                if i == j || leq(i, j) {
                    up[i].insert(j);
                    down[j].insert(i);
                }
            }
        }
        for i in 0..n {
            for j in up[i].iter() {
                if j != i && up[j].contains(i) {
                    return Err(Error::Precondition(format!(
                        "relation is not antisymmetric at {} and {}",
                        labels[i], labels[j]
                    )));
                }
                if !up[j].is_subset(&up[i]) {
                    return Err(Error::Precondition(format!(
                        "relation is not transitive through {}",
                        labels[j]
                    )));
                }
            }
        }
        Ok(RankedPoset::from_sets(labels, up, down))
    }

    fn from_sets(labels: Vec<String>, up: Vec<ElemSet>, down: Vec<ElemSet>) -> RankedPoset {
        let n = labels.len();
        let mut covers = Vec::new();
        for i in 0..n {
            for j in up[i].iter() {
                if j != i && up[i].intersection(&down[j]).count() == 2 {
                    covers.push((i, j));
                }
            }
        }
        // Longest chains from below, in an order compatible with <.
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| down[i].count());
        let mut rank = vec![0usize; n];
        let mut below: Vec<Vec<usize>> = vec![Vec::new(); n];
        for &(a, b) in &covers {
            below[b].push(a);
        }
        for &i in &order {
            rank[i] = below[i].iter().map(|&a| rank[a] + 1).max().unwrap_or(0);
        }
        let graded = covers.iter().all(|&(a, b)| rank[b] == rank[a] + 1);
        RankedPoset {
            labels,
            up,
            down,
            covers,
            rank,
            graded,
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.up[i].contains(j)
    }

    pub fn lt(&self, i: usize, j: usize) -> bool {
        i != j && self.leq(i, j)
    }

    pub fn up_set(&self, i: usize) -> &ElemSet {
        &self.up[i]
    }

    pub fn down_set(&self, i: usize) -> &ElemSet {
        &self.down[i]
    }

    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn rank(&self, i: usize) -> usize {
        self.rank[i]
    }

    /// Longest chain length (0 for a one-element poset).
    pub fn length(&self) -> usize {
        self.rank.iter().copied().max().unwrap_or(0)
    }

    pub fn is_graded(&self) -> bool {
        self.graded
    }

    pub fn minimal(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| self.down[i].count() == 1)
            .collect()
    }

    pub fn maximal(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| self.up[i].count() == 1)
            .collect()
    }

    pub fn bottom(&self) -> Option<usize> {
        match self.minimal().as_slice() {
            [b] => Some(*b),
            _ => None,
        }
    }

    pub fn top(&self) -> Option<usize> {
        match self.maximal().as_slice() {
            [t] => Some(*t),
            _ => None,
        }
    }

    /// Count of elements per rank.
    pub fn rank_counts(&self) -> Vec<usize> {
        let mut c = vec![0; self.length() + 1];
        for &r in &self.rank {
            c[r] += 1;
        }
        if self.is_empty() {
            c.clear();
        }
        c
    }

    /// `[a, b]` as element indices.
    pub fn interval(&self, a: usize, b: usize) -> Vec<usize> {
        self.up[a].intersection(&self.down[b]).to_vec()
    }

    pub fn dual(&self) -> RankedPoset {
        RankedPoset::from_sets(self.labels.clone(), self.down.clone(), self.up.clone())
    }

    /// Adds a new maximum (`top == true`) or minimum named `label`.
    pub fn adjoin(&self, label: &str, top: bool) -> RankedPoset {
        let n = self.len();
        let mut labels = self.labels.clone();
        labels.push(label.to_string());
        let grow = |s: &ElemSet| ElemSet::from_indices(n + 1, s.iter());
        let mut up: Vec<ElemSet> = self.up.iter().map(grow).collect();
        let mut down: Vec<ElemSet> = self.down.iter().map(grow).collect();
        let all = ElemSet::full(n + 1);
        let only = ElemSet::from_indices(n + 1, [n]);
        if top {
            for u in up.iter_mut() {
                u.insert(n);
            }
            up.push(only);
            down.push(all);
        } else {
            for d in down.iter_mut() {
                d.insert(n);
            }
            up.push(all);
            down.push(only);
        }
        RankedPoset::from_sets(labels, up, down)
    }

    /// `μ(b, x)` for every `x` (zero where `x` is not above `b`).
    pub fn mobius_from(&self, b: usize) -> Vec<i64> {
        let mut mu = vec![0i64; self.len()];
        let mut order: Vec<usize> = self.up[b].to_vec();
        order.sort_by_key(|&i| self.down[i].count());
        for &x in &order {
            if x == b {
                mu[x] = 1;
                continue;
            }
            let s: i64 = self.down[x]
                .intersection(&self.up[b])
                .iter()
                .filter(|&y| y != x)
                .map(|y| mu[y])
                .sum();
            mu[x] = -s;
        }
        mu
    }

    /// `χ(t) = Σ_p μ(0̂, p) t^{ℓ - rank(p)}`; needs a unique minimum.
    pub fn characteristic_polynomial(&self) -> Result<Poly2> {
        let b = self
            .bottom()
            .ok_or_else(|| Error::Precondition("poset has no unique minimum".into()))?;
        let mu = self.mobius_from(b);
        let l = self.length();
        let mut p = Poly2::zero();
        for (i, &m) in mu.iter().enumerate() {
            p.add_term(m, (l - self.rank[i]) as u32, 0);
        }
        Ok(p)
    }

    /// Reduced Euler characteristic of the order complex, by counting chains.
    pub fn reduced_euler_characteristic(&self) -> i64 {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by_key(|&i| self.down[i].count());
        // ends[x] = Σ over chains with maximum x of (-1)^(size - 1).
        let mut ends = vec![0i64; self.len()];
        for &x in &order {
            let below: i64 = self.down[x]
                .iter()
                .filter(|&y| y != x)
                .map(|y| ends[y])
                .sum();
            ends[x] = 1 - below;
        }
        -1 + ends.iter().sum::<i64>()
    }

    /// Maximal chains, each listed bottom to top.
    pub fn maximal_chains(&self) -> Vec<Vec<usize>> {
        let mut up_covers: Vec<Vec<usize>> = vec![Vec::new(); self.len()];
        for &(a, b) in &self.covers {
            up_covers[a].push(b);
        }
        let mut out = Vec::new();
        let mut stack: Vec<Vec<usize>> = self.minimal().into_iter().map(|m| vec![m]).collect();
        while let Some(c) = stack.pop() {
            let last = *c.last().unwrap();
            if up_covers[last].is_empty() {
                out.push(c);
            } else {
                for &n in up_covers[last].iter().rev() {
                    let mut d = c.clone();
                    d.push(n);
                    stack.push(d);
                }
            }
        }
        out.sort();
        out
    }

    /// Same labels and the same order relation on them.
    pub fn same_as(&self, other: &RankedPoset) -> bool {
        if self.len() != other.len() {
            return false;
        }
        let idx: HashMap<&str, usize> = other
            .labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.as_str(), i))
            .collect();
        let map: Option<Vec<usize>> = self
            .labels
            .iter()
            .map(|l| idx.get(l.as_str()).copied())
            .collect();
        let Some(map) = map else { return false };
        (0..self.len())
            .all(|i| (0..self.len()).all(|j| self.leq(i, j) == other.leq(map[i], map[j])))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "elements": self.labels,
            "rank": self.rank,
            "covers": self
                .covers
                .iter()
                .map(|&(a, b)| [self.labels[a].clone(), self.labels[b].clone()])
                .collect::<Vec<_>>(),
            "graded": self.graded,
        })
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph poset {\n  rankdir=BT;\n");
        for (i, l) in self.labels.iter().enumerate() {
            s.push_str(&format!("  n{i} [label=\"{}\"];\n", l.replace('"', "\\\"")));
        }
        for &(a, b) in &self.covers {
            s.push_str(&format!("  n{a} -> n{b};\n"));
        }
        s.push_str("}\n");
        s
    }
}

/// Members of the system ordered conformally.
pub fn covector_poset(s: &SignSystem) -> RankedPoset {
    let v = s.vectors();
    let labels = v.iter().map(|x| x.to_string()).collect();
    RankedPoset::from_relation(labels, |i, j| v[i].leq(&v[j]))
        .expect("conformal order is a partial order")
}

/// `{e1,e2}` style label of an element set.
pub fn set_label(s: &SignSystem, set: &ElemSet) -> String {
    format!("{{{}}}", s.ground().label(set))
}

/// Distinct zero sets of members, ordered by inclusion.
pub fn flats(s: &SignSystem) -> Vec<ElemSet> {
    let mut f: Vec<ElemSet> = s.iter().map(|x| x.zero_set()).collect();
    f.sort();
    f.dedup();
    f
}

pub fn flats_poset(s: &SignSystem) -> RankedPoset {
    let f = flats(s);
    let labels = f.iter().map(|x| set_label(s, x)).collect();
    RankedPoset::from_relation(labels, |i, j| f[i].is_subset(&f[j]))
        .expect("inclusion is a partial order")
}

/// Topes ordered by separation from `base`: `T ≤ T'` iff `S(B,T) ⊆ S(B,T')`.
pub fn tope_poset(s: &SignSystem, base: &SignVector) -> Result<RankedPoset> {
    let topes: Vec<SignVector> = s.iter().filter(|x| x.is_full()).cloned().collect();
    if !topes.contains(base) {
        return Err(Error::Precondition(format!("{base} is not a tope")));
    }
    let seps: Vec<ElemSet> = topes.iter().map(|t| base.separator(t)).collect();
    let labels = topes.iter().map(|t| t.to_string()).collect();
    RankedPoset::from_relation(labels, |i, j| seps[i].is_subset(&seps[j]))
}

/// Quotient by an orbit labelling: `Ga ≤ Gb` iff some member of `Ga` is
/// below some member of `Gb`. Fails if the induced relation is not a
/// partial order.
pub fn quotient_poset(
    p: &RankedPoset,
    orbit_of: &[usize],
    orbit_labels: &[String],
) -> Result<RankedPoset> {
    let k = orbit_labels.len();
    let mut rel = vec![ElemSet::empty(k); k];
    for i in 0..p.len() {
        for j in p.up_set(i).iter() {
            rel[orbit_of[i]].insert(orbit_of[j]);
        }
    }
    RankedPoset::from_relation(orbit_labels.to_vec(), |a, b| rel[a].contains(b))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Thinness {
    Thin,
    Subthin,
    Neither,
}

#[derive(Clone, Debug)]
pub struct ThinnessReport {
    pub class: Thinness,
    /// Histogram of sizes of length-2 intervals.
    pub interval_sizes: BTreeMap<usize, usize>,
    /// Number of three-element intervals that contain the adjoined top.
    pub top_triples: usize,
}

/// Classifies `P` with a new top adjoined (and a new bottom when `P` has no
/// unique minimum): thin if every length-2 interval has four elements,
/// subthin if the only exceptions are three-element intervals reaching the
/// adjoined top and at least one occurs.
pub fn thinness(p: &RankedPoset) -> ThinnessReport {
    let mut q = p.adjoin("⊤", true);
    if p.bottom().is_none() {
        q = q.adjoin("⊥", false);
    }
    let top = p.len();
    let mut sizes = BTreeMap::new();
    let mut top_triples = 0;
    let mut bad = false;
    for a in 0..q.len() {
        for b in q.up_set(a).iter() {
            if q.rank(b) != q.rank(a) + 2 {
                continue;
            }
            let n = q.interval(a, b).len();
            *sizes.entry(n).or_insert(0) += 1;
            match n {
                4 => {}
                3 if b == top => top_triples += 1,
                _ => bad = true,
            }
        }
    }
    let class = if bad || !q.is_graded() {
        Thinness::Neither
    } else if top_triples == 0 {
        Thinness::Thin
    } else {
        Thinness::Subthin
    };
    ThinnessReport {
        class,
        interval_sizes: sizes,
        top_triples,
    }
}

/// For each maximal chain `ω` and each `X ∈ ω`, the number of `Y` such that
/// `(ω \ X) ∪ {Y}` is a chain. Returns the histogram of these counts and the
/// chains `ω \ X` that extend uniquely.
pub fn chain_completions(p: &RankedPoset) -> (BTreeMap<usize, usize>, Vec<Vec<usize>>) {
    let mut hist = BTreeMap::new();
    let mut boundary = Vec::new();
    for chain in p.maximal_chains() {
        for k in 0..chain.len() {
            let below = k.checked_sub(1).map(|i| chain[i]);
            let above = chain.get(k + 1).copied();
            let r = p.rank(chain[k]);
            let count = (0..p.len())
                .filter(|&y| {
                    p.rank(y) == r
                        && below.is_none_or(|b| p.lt(b, y))
                        && above.is_none_or(|a| p.lt(y, a))
                        && (below.is_some() || p.down_set(y).count() == 1)
                        && (above.is_some() || p.up_set(y).count() == 1)
                })
                .count();
            *hist.entry(count).or_insert(0) += 1;
            if count == 1 {
                let mut rest = chain.clone();
                rest.remove(k);
                boundary.push(rest);
            }
        }
    }
    boundary.sort();
    boundary.dedup();
    (hist, boundary)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(n: usize) -> RankedPoset {
        RankedPoset::from_relation((0..n).map(|i| i.to_string()).collect(), |i, j| i <= j).unwrap()
    }

    fn square() -> SignSystem {
        let mut v = Vec::new();
        for a in ["-", "0", "+"] {
            for b in ["-", "0", "+"] {
                v.push(format!("{a}{b}"));
            }
        }
        SignSystem::from_strings(&["a".to_string(), "b".to_string()], &v).unwrap()
    }

    fn line() -> SignSystem {
        SignSystem::from_strings(&["a", "b"], &["++", "0+", "-+", "-0", "--"]).unwrap()
    }

    #[test]
    fn rejects_non_orders() {
        let r = RankedPoset::from_relation(vec!["a".into(), "b".into()], |_, _| true);
        assert!(r.is_err());
        let r = RankedPoset::from_relation(vec!["a".into(), "b".into(), "c".into()], |i, j| {
            (i, j) == (0, 1) || (i, j) == (1, 2)
        });
        assert!(r.is_err());
    }

    #[test]
    fn chain_invariants() {
        let c = chain(3);
        assert_eq!(c.covers(), &[(0, 1), (1, 2)]);
        assert_eq!(c.length(), 2);
        assert_eq!(
            c.characteristic_polynomial()
                .unwrap()
                .display_with("t", "s"),
            "t^2 - t"
        );
        assert_eq!(thinness(&c).class, Thinness::Neither);
        assert_eq!(c.reduced_euler_characteristic(), 0);
    }

    #[test]
    fn square_face_poset_is_thin() {
        let p = covector_poset(&square());
        assert_eq!(p.rank_counts(), vec![1, 4, 4]);
        assert_eq!(thinness(&p).class, Thinness::Thin);
        // Without the origin the fan is a circle.
        let without_bottom = RankedPoset::from_relation(
            (0..p.len())
                .filter(|&i| p.rank(i) > 0)
                .map(|i| p.label(i).to_string())
                .collect(),
            |i, j| {
                let idx: Vec<usize> = (0..p.len()).filter(|&k| p.rank(k) > 0).collect();
                p.leq(idx[i], idx[j])
            },
        )
        .unwrap();
        assert_eq!(without_bottom.reduced_euler_characteristic(), -1);
    }

    #[test]
    fn line_order_complex_is_a_ball() {
        let p = covector_poset(&line());
        assert_eq!(p.reduced_euler_characteristic(), 0);
        assert_eq!(thinness(&p.dual()).class, Thinness::Subthin);
        let (hist, boundary) = chain_completions(&p);
        assert!(hist.keys().all(|&k| k <= 2));
        let labels: Vec<Vec<&str>> = boundary
            .iter()
            .map(|c| c.iter().map(|&i| p.label(i)).collect())
            .collect();
        assert_eq!(labels, vec![vec!["--"], vec!["++"]]);
    }

    #[test]
    fn mobius_hall_identity() {
        // μ of P with both extremes adjoined equals the reduced Euler
        // characteristic of P.
        for s in [line(), square()] {
            let p = covector_poset(&s);
            let q = p.adjoin("top", true).adjoin("bot", false);
            let mu = q.mobius_from(q.len() - 1);
            assert_eq!(mu[q.len() - 2], p.reduced_euler_characteristic());
        }
    }

    #[test]
    fn flats_of_line() {
        let f = flats_poset(&line());
        let l: Vec<&str> = f.labels().iter().map(|s| s.as_str()).collect();
        assert_eq!(l, ["{}", "{a}", "{b}"]);
        assert_eq!(
            f.characteristic_polynomial()
                .unwrap()
                .display_with("t", "s"),
            "t - 2"
        );
    }

    #[test]
    fn tope_poset_of_line() {
        let s = line();
        let p = tope_poset(&s, &SignVector::parse("++").unwrap()).unwrap();
        assert_eq!(p.rank_counts(), vec![1, 1, 1]);
        assert!(tope_poset(&s, &SignVector::parse("0+").unwrap()).is_err());
    }

    #[test]
    fn quotient_by_trivial_and_collapsing_actions() {
        let c = chain(3);
        let labels: Vec<String> = (0..3).map(|i| i.to_string()).collect();
        let q = quotient_poset(&c, &[0, 1, 2], &labels).unwrap();
        assert!(q.same_as(&c));
        // Identifying the ends of a chain breaks antisymmetry.
        assert!(quotient_poset(&c, &[0, 1, 0], &labels[..2]).is_err());
    }

    #[test]
    fn json_and_dot() {
        let c = chain(2);
        assert_eq!(c.to_json()["covers"][0][1], "1");
        assert!(c.to_dot().contains("n0 -> n1"));
    }
}
