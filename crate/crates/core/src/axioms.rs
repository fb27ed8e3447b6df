//! Axiom checks for sign systems and the COM / OM / AOM classification.
//!
//! Every failing check returns the first violating tuple in canonical order
//! (outer vector before inner vector, both in canonical key order, then the
//! smallest element index), so witnesses are reproducible.

use std::collections::HashMap;
use std::fmt;

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::sign::{ElemSet, SignVector};
use crate::system::SignSystem;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axiom {
    /// Closed under composition.
    C,
    /// Face symmetry: `X ∘ (-Y)` in the system.
    FS,
    /// Strong elimination.
    SE,
    /// Strong elimination restricted to pairs of equal support.
    SEeq,
    /// Composition with the set of "parallel" differences `P(L)`.
    P,
    /// Equal-support, asymmetric variant of `P`.
    Pasym,
    /// Contains the zero vector.
    Zero,
    /// Closed under negation.
    Sym,
    /// Finite separators (always true here; metric is the largest one).
    S,
    /// Finite zero sets (metric is the largest one).
    Z,
    /// Finite lower intervals (metric is the largest one).
    I,
}

impl Axiom {
    pub const ALL: [Axiom; 11] = [
        Axiom::C,
        Axiom::FS,
        Axiom::SE,
        Axiom::SEeq,
        Axiom::P,
        Axiom::Pasym,
        Axiom::Zero,
        Axiom::Sym,
        Axiom::S,
        Axiom::Z,
        Axiom::I,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Axiom::C => "C",
            Axiom::FS => "FS",
            Axiom::SE => "SE",
            Axiom::SEeq => "SE=",
            Axiom::P => "P",
            Axiom::Pasym => "P=asym",
            Axiom::Zero => "0",
            Axiom::Sym => "Sym",
            Axiom::S => "S",
            Axiom::Z => "Z",
            Axiom::I => "I",
        }
    }

    pub fn from_name(s: &str) -> Result<Axiom> {
        Axiom::ALL
            .into_iter()
            .find(|a| a.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Parse(format!("unknown axiom {s:?}")))
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The data exhibiting a violated axiom.
///
/// Field meaning per axiom:
/// * `C`, `FS`: `missing = x ∘ y` (resp. `x ∘ -y`) is not in the system.
/// * `SE`, `SE=`: no eliminant of `x, y` vanishes at `element`.
/// * `P`, `P=asym`: `missing = (x ⊕ -y) ∘ z` is not in the system.
/// * `0`: `missing` is the zero vector.
/// * `Sym`: `missing = -x`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Witness {
    pub x: Option<SignVector>,
    pub y: Option<SignVector>,
    pub z: Option<SignVector>,
    pub element: Option<usize>,
    pub missing: Option<SignVector>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomReport {
    pub axiom: Axiom,
    pub holds: bool,
    pub witness: Option<Witness>,
    pub metric: Option<usize>,
}

impl AxiomReport {
    fn ok(axiom: Axiom) -> AxiomReport {
        AxiomReport {
            axiom,
            holds: true,
            witness: None,
            metric: None,
        }
    }

    fn from_witness(axiom: Axiom, w: Option<Witness>) -> AxiomReport {
        AxiomReport {
            axiom,
            holds: w.is_none(),
            witness: w,
            metric: None,
        }
    }

    pub fn to_json(&self, s: &SignSystem) -> Value {
        let mut v = json!({ "axiom": self.axiom.name(), "holds": self.holds });
        if let Some(w) = &self.witness {
            let mut o = serde_json::Map::new();
            for (k, x) in [
                ("x", &w.x),
                ("y", &w.y),
                ("z", &w.z),
                ("missing", &w.missing),
            ] {
                if let Some(x) = x {
                    o.insert(k.into(), Value::String(x.to_string()));
                }
            }
            if let Some(e) = w.element {
                o.insert("element".into(), Value::String(s.ground().name(e).into()));
            }
            v["witness"] = Value::Object(o);
        }
        if let Some(m) = self.metric {
            v["metric"] = json!(m);
        }
        v
    }
}

/// Union of the zero sets (restricted to `sep`) of all `Z` in `l` that agree
/// with `target` outside `sep`.
fn eliminant_zeros(l: &[SignVector], target: &SignVector, sep: &ElemSet) -> ElemSet {
    let mut acc = ElemSet::empty(sep.universe());
    for z in l {
        if z.agrees_off(target, sep) {
            acc = acc.union(&z.zero_set().intersection(sep));
            if sep.is_subset(&acc) {
                break;
            }
        }
    }
    acc
}

/// Whether `I(X,Y)` (with target `X∘Y`) or `I^=(X,Y)` (target `X`) is empty.
fn elimination_set_empty(l: &[SignVector], x: &SignVector, y: &SignVector, eq: bool) -> bool {
    let sep = x.separator(y);
    if sep.is_empty() {
        return true;
    }
    let target = if eq { x.clone() } else { x.compose(y) };
    !l.iter()
        .any(|z| z.agrees_off(&target, &sep) && !z.zero_set().is_disjoint(&sep))
}

fn first_pair<F>(n: usize, f: F) -> Option<Witness>
where
    F: Fn(usize, usize) -> Option<Witness> + Sync,
{
    (0..n)
        .into_par_iter()
        .find_map_first(|i| (0..n).find_map(|j| f(i, j)))
}

fn check_composition(s: &SignSystem, negate: bool) -> Option<Witness> {
    let l = s.vectors();
    first_pair(l.len(), |i, j| {
        let y = if negate { -&l[j] } else { l[j].clone() };
        let c = l[i].compose(&y);
        (!s.contains(&c)).then(|| Witness {
            x: Some(l[i].clone()),
            y: Some(l[j].clone()),
            missing: Some(c),
            ..Witness::default()
        })
    })
}

fn check_elimination(s: &SignSystem, equal_support: bool) -> Option<Witness> {
    let l = s.vectors();
    first_pair(l.len(), |i, j| {
        let (x, y) = (&l[i], &l[j]);
        if equal_support && x.support() != y.support() {
            return None;
        }
        let sep = x.separator(y);
        if sep.is_empty() {
            return None;
        }
        let target = if equal_support {
            x.clone()
        } else {
            x.compose(y)
        };
        let covered = eliminant_zeros(l, &target, &sep);
        sep.difference(&covered).first().map(|e| Witness {
            x: Some(x.clone()),
            y: Some(y.clone()),
            element: Some(e),
            ..Witness::default()
        })
    })
}

/// Pairs `(i, j)` whose difference vector `X_i ⊕ -X_j` belongs to `P(L)`
/// (or to the equal-support asymmetric variant), in canonical order.
fn parallel_differences(s: &SignSystem, asym: bool) -> Vec<(usize, usize, SignVector)> {
    let l = s.vectors();
    let n = l.len();
    let eligible: Vec<bool> = l.iter().map(|x| !asym || !s.contains(&-x)).collect();
    // Emptiness of I(X,-Y) and I(-X,Y) is symmetric in the unordered pair.
    let cache: HashMap<(usize, usize), bool> = (0..n)
        .into_par_iter()
        .flat_map_iter(|i| {
            let eligible = &eligible;
            (i..n).filter_map(move |j| {
                if !eligible[i] || !eligible[j] {
                    return None;
                }
                let (x, y) = (&l[i], &l[j]);
                if asym && x.support() != y.support() {
                    return None;
                }
                let (nx, ny) = (-x, -y);
                let ok = elimination_set_empty(l, x, &ny, asym)
                    && elimination_set_empty(l, &nx, y, asym);
                Some(((i, j), ok))
            })
        })
        .collect();
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let key = if i <= j { (i, j) } else { (j, i) };
            if cache.get(&key).copied().unwrap_or(false) {
                out.push((i, j, l[i].oplus(&-&l[j])));
            }
        }
    }
    out
}

/// The set `P(L)` (or `P^=_asym(L)`), sorted and deduplicated.
pub fn parallel_difference_set(s: &SignSystem, asym: bool) -> Vec<SignVector> {
    let mut v: Vec<SignVector> = parallel_differences(s, asym)
        .into_iter()
        .map(|t| t.2)
        .collect();
    v.sort();
    v.dedup();
    v
}

fn check_parallel(s: &SignSystem, asym: bool) -> Option<Witness> {
    let l = s.vectors();
    let mut seen: HashMap<SignVector, Option<usize>> = HashMap::new();
    for (i, j, p) in parallel_differences(s, asym) {
        let bad = *seen
            .entry(p.clone())
            .or_insert_with(|| l.iter().position(|z| !s.contains(&p.compose(z))));
        if let Some(k) = bad {
            return Some(Witness {
                x: Some(l[i].clone()),
                y: Some(l[j].clone()),
                z: Some(l[k].clone()),
                missing: Some(p.compose(&l[k])),
                element: None,
            });
        }
    }
    None
}

pub fn check_axiom(s: &SignSystem, axiom: Axiom) -> AxiomReport {
    let l = s.vectors();
    match axiom {
        Axiom::C => AxiomReport::from_witness(axiom, check_composition(s, false)),
        Axiom::FS => AxiomReport::from_witness(axiom, check_composition(s, true)),
        Axiom::SE => AxiomReport::from_witness(axiom, check_elimination(s, false)),
        Axiom::SEeq => AxiomReport::from_witness(axiom, check_elimination(s, true)),
        Axiom::P => AxiomReport::from_witness(axiom, check_parallel(s, false)),
        Axiom::Pasym => AxiomReport::from_witness(axiom, check_parallel(s, true)),
        Axiom::Zero => {
            let z = SignVector::zero(s.ground_len());
            let w = (!s.contains(&z)).then(|| Witness {
                missing: Some(z),
                ..Witness::default()
            });
            AxiomReport::from_witness(axiom, w)
        }
        Axiom::Sym => {
            let w = l.iter().find(|x| !s.contains(&-*x)).map(|x| Witness {
                x: Some(x.clone()),
                missing: Some(-x),
                ..Witness::default()
            });
            AxiomReport::from_witness(axiom, w)
        }
        Axiom::S => {
            let m = l
                .par_iter()
                .map(|x| l.iter().map(|y| x.separator(y).count()).max().unwrap_or(0))
                .max()
                .unwrap_or(0);
            AxiomReport {
                metric: Some(m),
                ..AxiomReport::ok(axiom)
            }
        }
        Axiom::Z => AxiomReport {
            metric: Some(l.iter().map(|x| x.zero_set().count()).max().unwrap_or(0)),
            ..AxiomReport::ok(axiom)
        },
        Axiom::I => {
            let m = l
                .par_iter()
                .map(|x| l.iter().filter(|y| y.leq(x)).count())
                .max()
                .unwrap_or(0);
            AxiomReport {
                metric: Some(m),
                ..AxiomReport::ok(axiom)
            }
        }
    }
}

/// All axiom reports plus the derived classes.
#[derive(Clone, Debug)]
pub struct Classification {
    pub reports: Vec<AxiomReport>,
    /// FS and SE.
    pub com: bool,
    /// 0, FS and SE.
    pub om: bool,
    /// C, FS, SE= and P=asym.
    pub aom_original: bool,
    /// FS, SE and P.
    pub aom_simplified: bool,
}

impl Classification {
    pub fn report(&self, a: Axiom) -> &AxiomReport {
        self.reports
            .iter()
            .find(|r| r.axiom == a)
            .expect("all axioms are checked")
    }

    pub fn holds(&self, a: Axiom) -> bool {
        self.report(a).holds
    }

    /// Both axiom systems agree and accept.
    pub fn is_aom(&self) -> bool {
        self.aom_original && self.aom_simplified
    }

    pub fn to_json(&self, s: &SignSystem) -> Value {
        json!({
            "axioms": self.reports.iter().map(|r| r.to_json(s)).collect::<Vec<_>>(),
            "COM": self.com,
            "OM": self.om,
            "AOM": self.is_aom(),
            "AOM_original": self.aom_original,
            "AOM_simplified": self.aom_simplified,
        })
    }
}

pub fn classify(s: &SignSystem) -> Classification {
    let reports: Vec<AxiomReport> = Axiom::ALL.iter().map(|&a| check_axiom(s, a)).collect();
    let h = |a: Axiom| {
        reports
            .iter()
            .find(|r| r.axiom == a)
            .map(|r| r.holds)
            .unwrap_or(false)
    };
    let com = h(Axiom::FS) && h(Axiom::SE);
    Classification {
        com,
        om: com && h(Axiom::Zero),
        aom_original: h(Axiom::C) && h(Axiom::FS) && h(Axiom::SEeq) && h(Axiom::Pasym),
        aom_simplified: com && h(Axiom::P),
        reports,
    }
}

/// Only the two AOM axiom systems, without the metrics (cheaper than
/// [`classify`] when sweeping many systems).
pub fn aom_both(s: &SignSystem) -> (bool, bool) {
    let h = |a| check_axiom(s, a).holds;
    let fs = h(Axiom::FS);
    let original = fs && h(Axiom::C) && h(Axiom::SEeq) && h(Axiom::Pasym);
    let simplified = fs && h(Axiom::SE) && h(Axiom::P);
    (original, simplified)
}

pub fn is_aom(s: &SignSystem) -> bool {
    let h = |a| check_axiom(s, a).holds;
    h(Axiom::FS) && h(Axiom::SE) && h(Axiom::P)
}

pub fn is_com(s: &SignSystem) -> bool {
    check_axiom(s, Axiom::FS).holds && check_axiom(s, Axiom::SE).holds
}

pub fn is_om(s: &SignSystem) -> bool {
    check_axiom(s, Axiom::Zero).holds && is_com(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(g: &[&str], v: &[&str]) -> SignSystem {
        SignSystem::from_strings(g, v).unwrap()
    }

    #[test]
    fn full_cube_is_an_oriented_matroid() {
        let mut vs = Vec::new();
        for a in ["-", "0", "+"] {
            for b in ["-", "0", "+"] {
                vs.push(format!("{a}{b}"));
            }
        }
        let vs: Vec<&str> = vs.iter().map(|s| s.as_str()).collect();
        let c = classify(&sys(&["a", "b"], &vs));
        assert!(c.om && c.com && c.is_aom());
    }

    #[test]
    fn two_point_line_is_aom_not_om() {
        let s = sys(&["a", "b"], &["++", "0+", "-+", "-0", "--"]);
        let c = classify(&s);
        assert!(c.is_aom());
        assert!(c.com);
        assert!(!c.om);
        assert!(!c.holds(Axiom::Sym));
        assert_eq!(c.report(Axiom::S).metric, Some(2));
        assert_eq!(c.report(Axiom::I).metric, Some(3));
    }

    #[test]
    fn missing_eliminant_is_reported() {
        // "+" and "-" on one element with no zero: SE fails at element a.
        let s = sys(&["a"], &["+", "-"]);
        let r = check_axiom(&s, Axiom::SE);
        assert!(!r.holds);
        let w = r.witness.unwrap();
        assert_eq!(w.element, Some(0));
        assert_eq!(w.x.unwrap().to_string(), "-");
    }

    #[test]
    fn composition_witness_is_first_pair() {
        let s = sys(&["a", "b"], &["+0", "0+"]);
        let r = check_axiom(&s, Axiom::C);
        let w = r.witness.unwrap();
        assert_eq!(w.x.unwrap().to_string(), "0+");
        assert_eq!(w.y.unwrap().to_string(), "+0");
        assert_eq!(w.missing.unwrap().to_string(), "++");
    }

    #[test]
    fn witness_json_uses_names() {
        let s = sys(&["a"], &["+", "-"]);
        let j = check_axiom(&s, Axiom::SE).to_json(&s);
        assert_eq!(j["axiom"], "SE");
        assert_eq!(j["holds"], false);
        assert_eq!(j["witness"]["element"], "a");
    }

    #[test]
    fn axiom_names_round_trip() {
        for a in Axiom::ALL {
            assert_eq!(Axiom::from_name(a.name()).unwrap(), a);
        }
    }
}
