//! Ground sets and finite systems of sign vectors.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sign::{ElemSet, Sign, SignVector};

/// An ordered, finite set of named elements.
#[derive(Clone, PartialEq, Eq)]
pub struct GroundSet {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

impl GroundSet {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<GroundSet> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        let mut index = HashMap::with_capacity(names.len());
        for (i, n) in names.iter().enumerate() {
            if index.insert(n.clone(), i).is_some() {
                return Err(Error::DuplicateElement(n.clone()));
            }
        }
        Ok(GroundSet { names, index })
    }

    /// Elements named `e0, e1, ...`.
    pub fn numbered(n: usize) -> GroundSet {
        GroundSet::new((0..n).map(|i| format!("e{i}"))).expect("distinct names")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownElement(name.to_string()))
    }

    pub fn set_of<S: AsRef<str>>(&self, names: &[S]) -> Result<ElemSet> {
        let mut s = ElemSet::empty(self.len());
        for n in names {
            s.insert(self.index_of(n.as_ref())?);
        }
        Ok(s)
    }

    /// Comma-separated element names of `set`, in ground order.
    pub fn label(&self, set: &ElemSet) -> String {
        set.iter()
            .map(|i| self.names[i].as_str())
            .collect::<Vec<_>>()
            .join(",")
    }

    /// Sub-ground on `keep` (indices in increasing order).
    pub fn subset(&self, keep: &[usize]) -> GroundSet {
        GroundSet::new(keep.iter().map(|&i| self.names[i].clone())).expect("distinct names")
    }
}

impl fmt::Debug for GroundSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.names).finish()
    }
}

/// A finite set of sign vectors over a shared ground set.
///
/// Vectors are kept deduplicated and sorted by the canonical key, so two
/// systems with the same members compare and serialize identically.
#[derive(Clone)]
pub struct SignSystem {
    ground: Arc<GroundSet>,
    vectors: Vec<SignVector>,
    lookup: HashSet<SignVector>,
}

#[derive(Serialize, Deserialize)]
struct SignSystemFile {
    ground: Vec<String>,
    covectors: Vec<String>,
}

impl SignSystem {
    pub fn new(
        ground: Arc<GroundSet>,
        vectors: impl IntoIterator<Item = SignVector>,
    ) -> Result<SignSystem> {
        let mut vs: Vec<SignVector> = Vec::new();
        for v in vectors {
            if v.len() != ground.len() {
                return Err(Error::GroundMismatch {
                    left: ground.len(),
                    right: v.len(),
                });
            }
            vs.push(v);
        }
        Ok(SignSystem::from_sorted(ground, vs))
    }

    fn from_sorted(ground: Arc<GroundSet>, mut vs: Vec<SignVector>) -> SignSystem {
        vs.sort();
        vs.dedup();
        let lookup = vs.iter().cloned().collect();
        SignSystem {
            ground,
            vectors: vs,
            lookup,
        }
    }

    /// Convenience constructor from element names and sign strings.
    pub fn from_strings<S: AsRef<str>>(ground: &[S], covectors: &[S]) -> Result<SignSystem> {
        let g = GroundSet::new(ground.iter().map(|s| s.as_ref().to_string()))?;
        let vs = covectors
            .iter()
            .map(|c| SignVector::parse(c.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        SignSystem::new(Arc::new(g), vs)
    }

    pub fn ground(&self) -> &Arc<GroundSet> {
        &self.ground
    }

    pub fn ground_len(&self) -> usize {
        self.ground.len()
    }

    pub fn vectors(&self) -> &[SignVector] {
        &self.vectors
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn contains(&self, x: &SignVector) -> bool {
        self.lookup.contains(x)
    }

    pub fn iter(&self) -> std::slice::Iter<'_, SignVector> {
        self.vectors.iter()
    }

    /// Same vectors, relabelled onto another ground of equal size.
    pub fn with_ground(&self, ground: Arc<GroundSet>) -> Result<SignSystem> {
        SignSystem::new(ground, self.vectors.iter().cloned())
    }

    /// Checks that `other` lives on an identical ground set.
    pub fn same_ground(&self, other: &SignSystem) -> Result<()> {
        if self.ground.names() != other.ground.names() {
            return Err(Error::GroundMismatch {
                left: self.ground_len(),
                right: other.ground_len(),
            });
        }
        Ok(())
    }

    /// Element index by name.
    pub fn elem(&self, name: &str) -> Result<usize> {
        self.ground.index_of(name)
    }

    pub fn from_json(text: &str) -> Result<SignSystem> {
        let f: SignSystemFile = serde_json::from_str(text)?;
        SignSystem::from_strings(&f.ground, &f.covectors)
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(SignSystemFile {
            ground: self.ground.names().to_vec(),
            covectors: self.vectors.iter().map(|v| v.to_string()).collect(),
        })
        .expect("serializable")
    }

    /// Pretty JSON with covectors in canonical order.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("serializable")
    }

    /// `{ -X : X in L }`.
    pub fn negated(&self) -> SignSystem {
        SignSystem::from_sorted(
            self.ground.clone(),
            self.vectors.iter().map(|v| -v).collect(),
        )
    }

    pub fn reorient(&self, tau: &Reorientation) -> Result<SignSystem> {
        if tau.flips.universe() != self.ground_len() {
            return Err(Error::GroundMismatch {
                left: self.ground_len(),
                right: tau.flips.universe(),
            });
        }
        Ok(SignSystem::from_sorted(
            self.ground.clone(),
            self.vectors
                .iter()
                .map(|v| v.reorient(&tau.flips))
                .collect(),
        ))
    }

    /// Topes: members not strictly below any other member.
    pub fn topes(&self) -> Vec<SignVector> {
        self.vectors
            .iter()
            .filter(|x| !self.vectors.iter().any(|y| y != *x && x.leq(y)))
            .cloned()
            .collect()
    }
}

impl PartialEq for SignSystem {
    fn eq(&self, other: &Self) -> bool {
        self.ground.names() == other.ground.names() && self.vectors == other.vectors
    }
}

impl Eq for SignSystem {}

impl fmt::Debug for SignSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SignSystem")
            .field("ground", &self.ground)
            .field(
                "vectors",
                &self
                    .vectors
                    .iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>(),
            )
            .finish()
    }
}

/// A total map `E -> {+1,-1}`, stored as the set of flipped elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reorientation {
    flips: ElemSet,
}

impl Reorientation {
    pub fn identity(len: usize) -> Reorientation {
        Reorientation {
            flips: ElemSet::empty(len),
        }
    }

    pub fn flipping(flips: ElemSet) -> Reorientation {
        Reorientation { flips }
    }

    /// Builds `τ` from a map giving `+1`/`-1` for every element of the ground.
    pub fn from_map(ground: &GroundSet, tau: &BTreeMap<String, i8>) -> Result<Reorientation> {
        let mut flips = ElemSet::empty(ground.len());
        for (name, &s) in tau {
            let i = ground.index_of(name)?;
            match s {
                1 => {}
                -1 => flips.insert(i),
                _ => {
                    return Err(Error::Parse(format!(
                        "reorientation value {s} for {name:?}"
                    )))
                }
            }
        }
        for name in ground.names() {
            if !tau.contains_key(name) {
                return Err(Error::NotTotal(name.clone()));
            }
        }
        Ok(Reorientation { flips })
    }

    pub fn flips(&self) -> &ElemSet {
        &self.flips
    }

    pub fn sign(&self, e: usize) -> Sign {
        if self.flips.contains(e) {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn apply(&self, x: &SignVector) -> SignVector {
        x.reorient(&self.flips)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip_is_canonical() {
        let s = SignSystem::from_strings(&["a", "b"], &["+0", "-+", "00", "+0"]).unwrap();
        assert_eq!(s.len(), 3);
        let text = s.to_json();
        let back = SignSystem::from_json(&text).unwrap();
        assert_eq!(back, s);
        assert_eq!(back.to_json(), text);
        let order: Vec<String> = s.iter().map(|v| v.to_string()).collect();
        assert_eq!(order, ["-+", "00", "+0"]);
    }

    #[test]
    fn rejects_wrong_lengths_and_duplicates() {
        assert!(SignSystem::from_strings(&["a", "b"], &["+"]).is_err());
        assert!(matches!(
            GroundSet::new(["a", "a"]),
            Err(Error::DuplicateElement(_))
        ));
    }

    #[test]
    fn reorientation_must_be_total() {
        let g = GroundSet::new(["a", "b"]).unwrap();
        let mut m = BTreeMap::new();
        m.insert("a".to_string(), -1);
        assert!(matches!(
            Reorientation::from_map(&g, &m),
            Err(Error::NotTotal(_))
        ));
        m.insert("b".to_string(), 1);
        let tau = Reorientation::from_map(&g, &m).unwrap();
        let s = SignSystem::from_strings(&["a", "b"], &["+-", "0+"]).unwrap();
        let r = s.reorient(&tau).unwrap();
        assert!(r.contains(&SignVector::parse("--").unwrap()));
        assert_eq!(r.reorient(&tau).unwrap(), s);
    }

    #[test]
    fn topes_are_maximal_members() {
        let s = SignSystem::from_strings(&["a", "b"], &["00", "+0", "++", "+-"]).unwrap();
        let t: Vec<String> = s.topes().iter().map(|v| v.to_string()).collect();
        assert_eq!(t, ["+-", "++"]);
    }
}
