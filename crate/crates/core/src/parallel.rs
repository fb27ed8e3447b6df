//! Parallelism classes, betweenness and the canonical order of each class.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::minors::is_simple;
use crate::rational::Q;
use crate::realize::{PeriodicArrangement, Provenance};
use crate::semimatroid::RuleReport;
use crate::sign::{ElemSet, Sign, SignVector};
use crate::system::{Reorientation, SignSystem};

/// No member of `s` vanishes on both `e` and `f`.
pub fn is_parallel(s: &SignSystem, e: usize, f: usize) -> Result<bool> {
    if e == f {
        return Err(Error::Precondition(
            "an element is not parallel to itself".into(),
        ));
    }
    Ok(!s
        .iter()
        .any(|x| x.get(e) == Sign::Zero && x.get(f) == Sign::Zero))
}

/// Signs `X(e)` over all members with `X(f) = 0`, as a bitmask
/// (bit 0: minus, bit 1: zero, bit 2: plus).
fn signs_on_zero(s: &SignSystem, f: usize, e: usize) -> u8 {
    s.iter()
        .filter(|x| x.get(f) == Sign::Zero)
        .fold(0, |m, x| m | sign_bit(x.get(e)))
}

fn sign_bit(s: Sign) -> u8 {
    match s {
        Sign::Minus => 1,
        Sign::Zero => 2,
        Sign::Plus => 4,
    }
}

/// The common value of `X(e)` over members with `X(f) = 0`.
pub fn sigma(s: &SignSystem, f: usize, e: usize) -> Result<Sign> {
    if !is_parallel(s, e, f)? {
        return Err(Error::Precondition(format!(
            "{} and {} are not parallel",
            s.ground().name(e),
            s.ground().name(f)
        )));
    }
    match signs_on_zero(s, f, e) {
        0 => Err(Error::Precondition(format!(
            "no member vanishes on {}",
            s.ground().name(f)
        ))),
        1 => Ok(Sign::Minus),
        4 => Ok(Sign::Plus),
        _ => Err(Error::Precondition(format!(
            "sign of {} is not constant on the zeros of {}",
            s.ground().name(e),
            s.ground().name(f)
        ))),
    }
}

/// `[f,g,h]`: distinct, and `X(f) = 0`, `Z(h) = 0` force `X(g) = -Z(g)`.
pub fn between(s: &SignSystem, f: usize, g: usize, h: usize) -> bool {
    if f == g || g == h || f == h {
        return false;
    }
    let a = signs_on_zero(s, f, g);
    let b = signs_on_zero(s, h, g);
    // Every pair (x, z) from a × b must be opposite and nonzero.
    if a == 0 || b == 0 {
        return true;
    }
    (a == 1 && b == 4) || (a == 4 && b == 1)
}

/// Precomputed betweenness on one class.
struct Betweenness {
    /// `on_zero[i][j]`: sign mask of member j on the zeros of member i.
    on_zero: Vec<Vec<u8>>,
}

impl Betweenness {
    fn new(s: &SignSystem, members: &[usize]) -> Betweenness {
        let on_zero = members
            .iter()
            .map(|&f| members.iter().map(|&e| signs_on_zero(s, f, e)).collect())
            .collect();
        Betweenness { on_zero }
    }

    /// Positions into `members`.
    fn holds(&self, a: usize, b: usize, c: usize) -> bool {
        if a == b || b == c || a == c {
            return false;
        }
        let (x, z) = (self.on_zero[a][b], self.on_zero[c][b]);
        x == 0 || z == 0 || (x == 1 && z == 4) || (x == 4 && z == 1)
    }
}

/// Checks BR1 to BR5 on `members`.
pub fn check_betweenness(s: &SignSystem, members: &[usize]) -> Vec<RuleReport> {
    let bw = Betweenness::new(s, members);
    let n = members.len();
    let name = |i: usize| s.ground().name(members[i]).to_string();
    let triple = |a: usize, b: usize, c: usize| format!("[{}, {}, {}]", name(a), name(b), name(c));
    let mut w: [Option<String>; 5] = Default::default();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let abc = bw.holds(a, b, c);
                if abc && (a == b || b == c || a == c) && w[0].is_none() {
                    w[0] = Some(triple(a, b, c));
                }
                let distinct = a != b && b != c && a != c;
                if distinct && w[1].is_none() {
                    let perms = [
                        (a, b, c),
                        (a, c, b),
                        (b, a, c),
                        (b, c, a),
                        (c, a, b),
                        (c, b, a),
                    ];
                    if !perms.iter().any(|&(x, y, z)| bw.holds(x, y, z)) {
                        w[1] = Some(format!("{{{}, {}, {}}}", name(a), name(b), name(c)));
                    }
                }
                if abc && !bw.holds(c, b, a) && w[2].is_none() {
                    w[2] = Some(triple(a, b, c));
                }
                if abc && bw.holds(a, c, b) && w[3].is_none() {
                    w[3] = Some(triple(a, b, c));
                }
                if abc && w[4].is_none() {
                    let bad = (0..n).find(|&x| {
                        x != a && x != b && x != c && !bw.holds(a, b, x) && !bw.holds(x, b, c)
                    });
                    if let Some(x) = bad {
                        w[4] = Some(format!("{} with x = {}", triple(a, b, c), name(x)));
                    }
                }
            }
        }
    }
    let [w1, w2, w3, w4, w5] = w;
    vec![
        rule("BR1", w1),
        rule("BR2", w2),
        rule("BR3", w3),
        rule("BR4", w4),
        rule("BR5", w5),
    ]
}

fn rule(name: &'static str, witness: Option<String>) -> RuleReport {
    RuleReport {
        rule: name,
        holds: witness.is_none(),
        witness,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OrderType {
    /// A finite segment: both extremes exist.
    Finite01,
    /// Order type of ℕ.
    HalfLine0Star,
    /// Order type of ℤ.
    Line2Star,
}

impl OrderType {
    pub fn name(self) -> &'static str {
        match self {
            OrderType::Finite01 => "finite01",
            OrderType::HalfLine0Star => "halfline0star",
            OrderType::Line2Star => "line2star",
        }
    }
}

/// A parallelism class in increasing order, with the reorientation that
/// makes `x < y` equivalent to `σ_y(x) = +`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParallelClass {
    pub members: Vec<usize>,
    /// `flips[k]`: whether `members[k]` is reoriented.
    pub flips: Vec<bool>,
    pub order_type: OrderType,
}

impl ParallelClass {
    pub fn position(&self, e: usize) -> Option<usize> {
        self.members.iter().position(|&m| m == e)
    }

    pub fn minimum(&self) -> usize {
        self.members[0]
    }

    /// The reversed order with a matching reorientation.
    pub fn reversed(&self, s: &SignSystem) -> Result<ParallelClass> {
        let mut members = self.members.clone();
        members.reverse();
        let flips = canonical_flips(s, &members)?;
        Ok(ParallelClass {
            members,
            flips,
            order_type: self.order_type,
        })
    }

    /// `δ` and its sign for `x` (given in the original orientation): every
    /// member before `δ` is `+`, every member after is `-`, and `δ` itself
    /// is `0` or `-` after reorientation.
    pub fn separating_element(&self, x: &SignVector) -> Result<(usize, Sign)> {
        let signs: Vec<Sign> = self
            .members
            .iter()
            .zip(&self.flips)
            .map(|(&e, &f)| if f { -x.get(e) } else { x.get(e) })
            .collect();
        let k =
            match signs.iter().rposition(|&s| s == Sign::Plus) {
                None => 0,
                Some(last) if last + 1 < signs.len() => last + 1,
                Some(_) => return Err(Error::Precondition(
                    "every listed member is positive; the separating element lies beyond the data"
                        .into(),
                )),
            };
        let monotone = signs[..k].iter().all(|&s| s == Sign::Plus)
            && signs[k + 1..].iter().all(|&s| s == Sign::Minus)
            && signs[k] != Sign::Plus;
        if !monotone {
            return Err(Error::Precondition(format!(
                "{x} is not monotone along the class"
            )));
        }
        Ok((self.members[k], signs[k]))
    }

    pub fn to_json(&self, s: &SignSystem) -> Value {
        json!({
            "members": self.members.iter().map(|&e| s.ground().name(e)).collect::<Vec<_>>(),
            "order_type": self.order_type.name(),
            "reoriented": self
                .members
                .iter()
                .zip(&self.flips)
                .filter(|(_, &f)| f)
                .map(|(&e, _)| s.ground().name(e))
                .collect::<Vec<_>>(),
        })
    }
}

/// Reorientation flags so that `x < y` iff `σ_y(x) = +` along `members`.
fn canonical_flips(s: &SignSystem, members: &[usize]) -> Result<Vec<bool>> {
    let n = members.len();
    if n == 1 {
        return Ok(vec![false]);
    }
    let (e, f) = (members[0], members[1]);
    let mut flips = vec![false; n];
    flips[0] = sigma(s, f, e)? != Sign::Plus;
    for k in 1..n {
        flips[k] = sigma(s, e, members[k])? != Sign::Minus;
    }
    for a in 0..n {
        for b in 0..n {
            if a == b {
                continue;
            }
            let mut sg = sigma(s, members[b], members[a])?;
            if flips[a] {
                sg = -sg;
            }
            if (sg == Sign::Plus) != (a < b) {
                return Err(Error::Precondition(format!(
                    "no reorientation orders the class at {}",
                    s.ground().name(members[a])
                )));
            }
        }
    }
    Ok(flips)
}

/// Classes of the reflexive closure of parallelism, each in its
/// betweenness order. Of the two extremes, the one earlier in ground order
/// becomes the minimum.
pub fn parallel_classes(s: &SignSystem) -> Result<Vec<ParallelClass>> {
    if !is_simple(s) {
        return Err(Error::Precondition(
            "system is not simple; simplify it first".into(),
        ));
    }
    let n = s.ground_len();
    let mut par = vec![ElemSet::empty(n); n];
    for e in 0..n {
        par[e].insert(e);
    }
    for x in s.iter() {
        let z: Vec<usize> = x.zero_set().to_vec();
        for &a in &z {
            for &b in &z {
                if a != b {
                    par[a].insert(b);
                }
            }
        }
    }
    // par[e] now holds e and the elements NOT parallel to it; complement.
    let classes_raw: Vec<ElemSet> = (0..n)
        .map(|e| {
            let mut c = par[e].complement();
            c.insert(e);
            c
        })
        .collect();
    let mut seen = ElemSet::empty(n);
    let mut out = Vec::new();
    for e in 0..n {
        if seen.contains(e) {
            continue;
        }
        let class = &classes_raw[e];
        for f in class.iter() {
            if &classes_raw[f] != class {
                return Err(Error::Precondition(format!(
                    "parallelism is not transitive at {}",
                    s.ground().name(f)
                )));
            }
        }
        seen = seen.union(class);
        out.push(order_class(s, &class.to_vec())?);
    }
    Ok(out)
}

fn order_class(s: &SignSystem, members: &[usize]) -> Result<ParallelClass> {
    let bw = Betweenness::new(s, members);
    let n = members.len();
    let mut order: Vec<usize> = (0..n).collect();
    if n >= 3 {
        let is_end = |x: usize| !(0..n).any(|a| (0..n).any(|c| bw.holds(a, x, c)));
        let start = (0..n)
            .find(|&x| is_end(x))
            .ok_or_else(|| Error::Precondition("class has no extreme element".into()))?;
        let mut rest: Vec<usize> = (0..n).filter(|&x| x != start).collect();
        // Position = number of members strictly between start and x.
        rest.sort_by_key(|&x| (0..n).filter(|&y| bw.holds(start, y, x)).count());
        order = std::iter::once(start).chain(rest).collect();
        for w in order.windows(3) {
            if !bw.holds(w[0], w[1], w[2]) {
                return Err(Error::Precondition(
                    "betweenness is not a linear order".into(),
                ));
            }
        }
    }
    let members: Vec<usize> = order.iter().map(|&i| members[i]).collect();
    let flips = canonical_flips(s, &members)?;
    Ok(ParallelClass {
        members,
        flips,
        order_type: OrderType::Finite01,
    })
}

/// Combined reorientation of all classes.
pub fn canonical_reorientation(s: &SignSystem, classes: &[ParallelClass]) -> Reorientation {
    let mut flips = ElemSet::empty(s.ground_len());
    for c in classes {
        for (&e, &f) in c.members.iter().zip(&c.flips) {
            if f {
                flips.insert(e);
            }
        }
    }
    Reorientation::flipping(flips)
}

/// Elements grouped by the order type of their class.
pub fn partition(classes: &[ParallelClass]) -> BTreeMap<OrderType, Vec<usize>> {
    let mut out: BTreeMap<OrderType, Vec<usize>> = BTreeMap::new();
    for c in classes {
        out.entry(c.order_type).or_default().extend(&c.members);
    }
    for v in out.values_mut() {
        v.sort();
    }
    out
}

/// Window elements of a periodic arrangement, with their position along the
/// normal of the first orbit of their parallel family and the sign relating
/// the two normals.
pub fn periodic_positions(p: &PeriodicArrangement, prov: &[Provenance]) -> Vec<(usize, Q, bool)> {
    prov.iter()
        .map(|pv| {
            let family = p.parallel_orbits(pv.orbit)[0];
            let base = &p.reps()[family].normal;
            let n = &p.reps()[pv.orbit].normal;
            let k = base
                .iter()
                .position(|x| !num_traits::Zero::is_zero(x))
                .unwrap();
            let c = &n[k] / &base[k];
            let pos = p.offset(pv.orbit, pv.step) / &c;
            (family, pos, num_traits::Signed::is_negative(&c))
        })
        .collect()
}

/// Classes of a periodic window: every orbit is translated in both
/// directions, so all classes have the order type of ℤ. Each class is
/// oriented by increasing position along its family normal.
pub fn periodic_classes(
    s: &SignSystem,
    p: &PeriodicArrangement,
    prov: &[Provenance],
) -> Result<Vec<ParallelClass>> {
    if prov.len() != s.ground_len() {
        return Err(Error::GroundMismatch {
            left: prov.len(),
            right: s.ground_len(),
        });
    }
    let pos = periodic_positions(p, prov);
    parallel_classes(s)?
        .into_iter()
        .map(|c| {
            let first = &pos[c.members[0]].1;
            let last = &pos[*c.members.last().unwrap()].1;
            let mut c = if first > last { c.reversed(s)? } else { c };
            c.order_type = OrderType::Line2Star;
            Ok(c)
        })
        .collect()
}
