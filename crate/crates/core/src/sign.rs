//! Signs, element sets and sign vectors.
//!
//! A sign vector over an ordered ground set of `n` elements is stored as two
//! bit planes (`pos`, `neg`), so composition, separators and conformity are
//! word-parallel operations.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Neg;

use smallvec::SmallVec;

use crate::error::{Error, Result};

pub(crate) type Words = SmallVec<[u64; 2]>;

fn word_count(len: usize) -> usize {
    len.div_ceil(64)
}

fn zero_words(len: usize) -> Words {
    SmallVec::from_elem(0, word_count(len))
}

/// One of `-`, `0`, `+`.
///
/// The derived `Ord` is the canonical key order `- < 0 < +` used for sorting
/// covector lists. The partial order `0 < +`, `0 < -` is [`Sign::leq`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Minus,
    Zero,
    Plus,
}

impl Sign {
    pub fn to_char(self) -> char {
        match self {
            Sign::Minus => '-',
            Sign::Zero => '0',
            Sign::Plus => '+',
        }
    }

    pub fn from_char(c: char) -> Option<Sign> {
        match c {
            '-' => Some(Sign::Minus),
            '0' => Some(Sign::Zero),
            '+' => Some(Sign::Plus),
            _ => None,
        }
    }

    pub fn from_ordering(o: Ordering) -> Sign {
        match o {
            Ordering::Less => Sign::Minus,
            Ordering::Equal => Sign::Zero,
            Ordering::Greater => Sign::Plus,
        }
    }

    pub fn to_i8(self) -> i8 {
        match self {
            Sign::Minus => -1,
            Sign::Zero => 0,
            Sign::Plus => 1,
        }
    }

    /// Natural order on signs: `0` is below both `+` and `-`.
    pub fn leq(self, other: Sign) -> bool {
        self == Sign::Zero || self == other
    }
}

impl Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        match self {
            Sign::Minus => Sign::Plus,
            Sign::Zero => Sign::Zero,
            Sign::Plus => Sign::Minus,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_char())
    }
}

/// A subset of a ground set given by element indices.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ElemSet {
    len: usize,
    words: Words,
}

impl ElemSet {
    pub fn empty(len: usize) -> ElemSet {
        ElemSet {
            len,
            words: zero_words(len),
        }
    }

    pub fn full(len: usize) -> ElemSet {
        let mut s = ElemSet::empty(len);
        for i in 0..len {
            s.insert(i);
        }
        s
    }

    pub fn from_indices(len: usize, idx: impl IntoIterator<Item = usize>) -> ElemSet {
        let mut s = ElemSet::empty(len);
        for i in idx {
            s.insert(i);
        }
        s
    }

    pub(crate) fn from_words(len: usize, words: Words) -> ElemSet {
        ElemSet { len, words }
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.words
    }

    /// Size of the ambient ground set.
    pub fn universe(&self) -> usize {
        self.len
    }

    pub fn insert(&mut self, i: usize) {
        assert!(
            i < self.len,
            "element {i} outside ground of size {}",
            self.len
        );
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn remove(&mut self, i: usize) {
        assert!(i < self.len);
        self.words[i / 64] &= !(1 << (i % 64));
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.len && self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let t = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(k * 64 + t)
            })
        })
    }

    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }

    pub fn is_subset(&self, other: &ElemSet) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &ElemSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    pub fn union(&self, other: &ElemSet) -> ElemSet {
        self.zip(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &ElemSet) -> ElemSet {
        self.zip(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &ElemSet) -> ElemSet {
        self.zip(other, |a, b| a & !b)
    }

    pub fn complement(&self) -> ElemSet {
        self.zip(&ElemSet::full(self.len), |a, b| !a & b)
    }

    fn zip(&self, other: &ElemSet, f: impl Fn(u64, u64) -> u64) -> ElemSet {
        assert_eq!(self.len, other.len, "element sets over different grounds");
        ElemSet {
            len: self.len,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl Ord for ElemSet {
    /// Smaller sets first, then lexicographic on sorted indices.
    fn cmp(&self, other: &Self) -> Ordering {
        self.count()
            .cmp(&other.count())
            .then_with(|| self.iter().cmp(other.iter()))
    }
}

impl PartialOrd for ElemSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for ElemSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// A vector in `{-,0,+}^E`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SignVector {
    len: usize,
    pos: Words,
    neg: Words,
}

impl SignVector {
    pub fn zero(len: usize) -> SignVector {
        SignVector {
            len,
            pos: zero_words(len),
            neg: zero_words(len),
        }
    }

    pub fn from_signs(signs: &[Sign]) -> SignVector {
        let mut v = SignVector::zero(signs.len());
        for (i, &s) in signs.iter().enumerate() {
            v.set(i, s);
        }
        v
    }

    /// Parses a string such as `"+0-+"`.
    pub fn parse(s: &str) -> Result<SignVector> {
        let signs = s
            .chars()
            .map(|c| {
                Sign::from_char(c).ok_or_else(|| Error::Parse(format!("bad sign {c:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SignVector::from_signs(&signs))
    }

    pub(crate) fn from_planes(len: usize, pos: Words, neg: Words) -> SignVector {
        SignVector { len, pos, neg }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> Sign {
        assert!(
            i < self.len,
            "element {i} outside ground of size {}",
            self.len
        );
        let (k, b) = (i / 64, i % 64);
        if self.pos[k] >> b & 1 == 1 {
            Sign::Plus
        } else if self.neg[k] >> b & 1 == 1 {
            Sign::Minus
        } else {
            Sign::Zero
        }
    }

    pub fn set(&mut self, i: usize, s: Sign) {
        assert!(
            i < self.len,
            "element {i} outside ground of size {}",
            self.len
        );
        let (k, m) = (i / 64, 1u64 << (i % 64));
        self.pos[k] &= !m;
        self.neg[k] &= !m;
        match s {
            Sign::Plus => self.pos[k] |= m,
            Sign::Minus => self.neg[k] |= m,
            Sign::Zero => {}
        }
    }

    pub fn with(&self, i: usize, s: Sign) -> SignVector {
        let mut v = self.clone();
        v.set(i, s);
        v
    }

    pub fn signs(&self) -> impl Iterator<Item = Sign> + '_ {
        (0..self.len).map(|i| self.get(i))
    }

    pub fn positive(&self) -> ElemSet {
        ElemSet::from_words(self.len, self.pos.clone())
    }

    pub fn negative(&self) -> ElemSet {
        ElemSet::from_words(self.len, self.neg.clone())
    }

    pub fn support(&self) -> ElemSet {
        ElemSet::from_words(
            self.len,
            self.pos.iter().zip(&self.neg).map(|(p, n)| p | n).collect(),
        )
    }

    pub fn zero_set(&self) -> ElemSet {
        self.support().complement()
    }

    pub fn is_zero(&self) -> bool {
        self.pos.iter().chain(&self.neg).all(|&w| w == 0)
    }

    /// No zero entries.
    pub fn is_full(&self) -> bool {
        self.support().count() == self.len
    }

    fn same_len(&self, other: &SignVector) {
        assert_eq!(
            self.len, other.len,
            "sign vectors over grounds of different sizes"
        );
    }

    /// `S(X,Y)`: elements where the two vectors have opposite nonzero signs.
    pub fn separator(&self, other: &SignVector) -> ElemSet {
        self.same_len(other);
        ElemSet::from_words(
            self.len,
            (0..self.pos.len())
                .map(|k| (self.pos[k] & other.neg[k]) | (self.neg[k] & other.pos[k]))
                .collect(),
        )
    }

    /// `X ∘ Y`: take `X(e)` where nonzero, else `Y(e)`.
    pub fn compose(&self, other: &SignVector) -> SignVector {
        self.same_len(other);
        let mut pos = Words::with_capacity(self.pos.len());
        let mut neg = Words::with_capacity(self.pos.len());
        for k in 0..self.pos.len() {
            let supp = self.pos[k] | self.neg[k];
            pos.push(self.pos[k] | (other.pos[k] & !supp));
            neg.push(self.neg[k] | (other.neg[k] & !supp));
        }
        SignVector::from_planes(self.len, pos, neg)
    }

    /// `X ⊕ Y`: zero on the separator, `X ∘ Y` elsewhere.
    pub fn oplus(&self, other: &SignVector) -> SignVector {
        let c = self.compose(other);
        let sep = self.separator(other);
        let pos = c.pos.iter().zip(sep.words()).map(|(p, s)| p & !s).collect();
        let neg = c.neg.iter().zip(sep.words()).map(|(n, s)| n & !s).collect();
        SignVector::from_planes(self.len, pos, neg)
    }

    /// Natural (conformal) order: `X ≤ Y` iff `X(e) ∈ {0, Y(e)}` for all `e`.
    pub fn leq(&self, other: &SignVector) -> bool {
        self.same_len(other);
        (0..self.pos.len())
            .all(|k| self.pos[k] & !other.pos[k] == 0 && self.neg[k] & !other.neg[k] == 0)
    }

    /// True when `self` and `other` agree on every element outside `mask`.
    pub fn agrees_off(&self, other: &SignVector, mask: &ElemSet) -> bool {
        self.same_len(other);
        let m = mask.words();
        (0..self.pos.len()).all(|k| {
            (self.pos[k] ^ other.pos[k]) & !m[k] == 0 && (self.neg[k] ^ other.neg[k]) & !m[k] == 0
        })
    }

    /// Restriction to the elements of `keep`, in increasing index order.
    pub fn restrict(&self, keep: &[usize]) -> SignVector {
        let mut v = SignVector::zero(keep.len());
        for (j, &i) in keep.iter().enumerate() {
            v.set(j, self.get(i));
        }
        v
    }

    /// Flips the signs on `set`.
    pub fn reorient(&self, set: &ElemSet) -> SignVector {
        let f = set.words();
        let pos = (0..self.pos.len())
            .map(|k| (self.pos[k] & !f[k]) | (self.neg[k] & f[k]))
            .collect();
        let neg = (0..self.pos.len())
            .map(|k| (self.neg[k] & !f[k]) | (self.pos[k] & f[k]))
            .collect();
        SignVector::from_planes(self.len, pos, neg)
    }

    pub fn checked_compose(&self, other: &SignVector) -> Result<SignVector> {
        check_len(self, other)?;
        Ok(self.compose(other))
    }

    pub fn checked_separator(&self, other: &SignVector) -> Result<ElemSet> {
        check_len(self, other)?;
        Ok(self.separator(other))
    }

    pub fn checked_oplus(&self, other: &SignVector) -> Result<SignVector> {
        check_len(self, other)?;
        Ok(self.oplus(other))
    }

    pub fn checked_leq(&self, other: &SignVector) -> Result<bool> {
        check_len(self, other)?;
        Ok(self.leq(other))
    }
}

fn check_len(a: &SignVector, b: &SignVector) -> Result<()> {
    if a.len != b.len {
        return Err(Error::GroundMismatch {
            left: a.len,
            right: b.len,
        });
    }
    Ok(())
}

impl Neg for &SignVector {
    type Output = SignVector;
    fn neg(self) -> SignVector {
        SignVector::from_planes(self.len, self.neg.clone(), self.pos.clone())
    }
}

impl Neg for SignVector {
    type Output = SignVector;
    fn neg(self) -> SignVector {
        SignVector::from_planes(self.len, self.neg, self.pos)
    }
}

impl Ord for SignVector {
    /// Canonical key order: lexicographic over the ground order with `- < 0 < +`.
    fn cmp(&self, other: &Self) -> Ordering {
        self.len.cmp(&other.len).then_with(|| {
            for k in 0..self.pos.len() {
                let diff = (self.pos[k] ^ other.pos[k]) | (self.neg[k] ^ other.neg[k]);
                if diff != 0 {
                    let i = k * 64 + diff.trailing_zeros() as usize;
                    return self.get(i).cmp(&other.get(i));
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for SignVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in self.signs() {
            write!(f, "{}", s.to_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SignVector({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> SignVector {
        SignVector::parse(s).unwrap()
    }

    #[test]
    fn compose_and_separator() {
        assert_eq!(v("+0-").compose(&v("-+0")), v("++-"));
        assert_eq!(v("+0-").separator(&v("-+0")).to_vec(), vec![0]);
        assert_eq!(v("0+").compose(&v("-0")), v("-+"));
        assert_eq!(v("+-").oplus(&v("--")), v("0-"));
    }

    #[test]
    fn composition_is_associative_on_samples() {
        let xs = ["+0-", "-+0", "00+", "+-+", "0-0"];
        for a in xs {
            for b in xs {
                for c in xs {
                    let (a, b, c) = (v(a), v(b), v(c));
                    assert_eq!(a.compose(&b).compose(&c), a.compose(&b.compose(&c)));
                }
            }
        }
    }

    #[test]
    fn zero_vector_is_identity() {
        let x = v("+-0+");
        let z = SignVector::zero(4);
        assert_eq!(z.compose(&x), x);
        assert_eq!(x.compose(&z), x);
        assert!(z.leq(&x));
    }

    #[test]
    fn canonical_order_is_lexicographic() {
        let mut xs = vec![v("+0"), v("-+"), v("0-"), v("--"), v("0+")];
        xs.sort();
        let s: Vec<String> = xs.iter().map(|x| x.to_string()).collect();
        assert_eq!(s, ["--", "-+", "0-", "0+", "+0"]);
    }

    #[test]
    fn wide_vectors_cross_word_boundaries() {
        let mut a = SignVector::zero(130);
        a.set(0, Sign::Plus);
        a.set(64, Sign::Minus);
        a.set(129, Sign::Plus);
        let b = -&a;
        assert_eq!(a.separator(&b).to_vec(), vec![0, 64, 129]);
        assert_eq!(a.support().count(), 3);
        assert_eq!(a.zero_set().count(), 127);
        assert!(a < a.with(100, Sign::Plus));
    }

    #[test]
    fn checked_ops_reject_length_mismatch() {
        assert!(matches!(
            v("+0").checked_compose(&v("+")),
            Err(Error::GroundMismatch { .. })
        ));
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(SignVector::parse("+x").is_err());
    }
}
