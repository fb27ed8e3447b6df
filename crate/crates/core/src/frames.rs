//! Basis frames of periodic windows: the half-integer index grid, the maps
//! between index points and frame covectors, and fibers of the restriction
//! to the frame.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::minors::restrict;
use crate::parallel::periodic_positions;
use crate::poset::RankedPoset;
use crate::rational::{ceil_q, floor_q, fmt_q, q, q_frac, rank, Q};
use crate::realize::{PeriodicArrangement, Provenance};
use crate::sign::{ElemSet, Sign, SignVector};
use crate::system::{Reorientation, SignSystem};

/// One half-integer coordinate per basis class.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IndexPoint(pub Vec<Q>);

impl IndexPoint {
    pub fn from_halves(h: &[i64]) -> IndexPoint {
        IndexPoint(h.iter().map(|&x| q_frac(x, 2)).collect())
    }

    /// Number of half-integer coordinates: the rank of the cell.
    pub fn rank(&self) -> usize {
        self.0.iter().filter(|x| !x.is_integer()).count()
    }
}

impl fmt::Display for IndexPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(fmt_q).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// `p ⪯ q` coordinatewise: equal, or `q` a half-integer and `p` one of its
/// two integer neighbours.
pub fn index_leq(p: &IndexPoint, q_: &IndexPoint) -> bool {
    let half = q_frac(1, 2);
    p.0.iter()
        .zip(&q_.0)
        .all(|(a, b)| a == b || (!b.is_integer() && a.is_integer() && (a - b).abs() == half))
}

pub fn index_poset(points: &[IndexPoint]) -> Result<RankedPoset> {
    let labels = points.iter().map(ToString::to_string).collect();
    RankedPoset::from_relation(labels, |i, j| index_leq(&points[i], &points[j]))
}

/// A basis of parallel families of a periodic arrangement together with the
/// realized window, canonically oriented.
#[derive(Clone, Debug)]
pub struct BasisFrame {
    source: PeriodicArrangement,
    /// First orbit of each basis family.
    families: Vec<usize>,
    system: SignSystem,
    prov: Vec<Provenance>,
    /// Window elements in the frame, and their class and `j` value.
    frame_elems: Vec<usize>,
    class_of: Vec<usize>,
    j: Vec<Q>,
    frame: SignSystem,
}

impl BasisFrame {
    /// `basis` names one orbit per family; the families' normals must be a
    /// basis of the ambient space.
    pub fn new(
        p: &PeriodicArrangement,
        basis: &[usize],
        window: &[(Q, Q)],
        seed: u64,
    ) -> Result<BasisFrame> {
        let d = p.dim();
        let mut families = Vec::new();
        for &o in basis {
            if o >= p.reps().len() {
                return Err(Error::UnknownElement(format!("orbit {o}")));
            }
            families.push(p.parallel_orbits(o)[0]);
        }
        let normals: Vec<Vec<Q>> = families
            .iter()
            .map(|&f| p.reps()[f].normal.clone())
            .collect();
        if families.len() != d || rank(&normals) != d {
            return Err(Error::Precondition("frame families are not a basis".into()));
        }
        let (arr, prov) = p.window_restrict(window)?;
        let raw = arr.covectors(seed)?;
        let pos = periodic_positions(p, &prov);
        let flips = ElemSet::from_indices(prov.len(), (0..prov.len()).filter(|&i| pos[i].2));
        let system = raw.reorient(&Reorientation::flipping(flips))?;
        let mut frame_elems = Vec::new();
        let mut class_of = Vec::new();
        let mut j = Vec::new();
        for (i, (fam, position, _)) in pos.iter().enumerate() {
            if let Some(c) = families.iter().position(|f| f == fam) {
                frame_elems.push(i);
                class_of.push(c);
                j.push(family_index(p, *fam, position));
            }
        }
        let keep = ElemSet::from_indices(prov.len(), frame_elems.iter().copied());
        let frame = restrict(&system, &keep)?;
        Ok(BasisFrame {
            source: p.clone(),
            families,
            system,
            prov,
            frame_elems,
            class_of,
            j,
            frame,
        })
    }

    /// The first `dim` families, in orbit order, whose normals are
    /// independent.
    pub fn greedy(p: &PeriodicArrangement, window: &[(Q, Q)], seed: u64) -> Result<BasisFrame> {
        let mut basis: Vec<usize> = Vec::new();
        for o in 0..p.reps().len() {
            let mut rows: Vec<Vec<Q>> = basis.iter().map(|&b| p.reps()[b].normal.clone()).collect();
            rows.push(p.reps()[o].normal.clone());
            if rank(&rows) == rows.len() {
                basis.push(o);
            }
        }
        BasisFrame::new(p, &basis, window, seed)
    }

    pub fn source(&self) -> &PeriodicArrangement {
        &self.source
    }

    /// The whole window system, canonically oriented.
    pub fn system(&self) -> &SignSystem {
        &self.system
    }

    pub fn provenance(&self) -> &[Provenance] {
        &self.prov
    }

    /// Restriction of the window system to the frame elements.
    pub fn frame_system(&self) -> &SignSystem {
        &self.frame
    }

    pub fn family_names(&self) -> Vec<&str> {
        self.families
            .iter()
            .map(|&f| self.source.reps()[f].name.as_str())
            .collect()
    }

    /// `j` of each frame element, in frame ground order.
    pub fn j_values(&self) -> &[Q] {
        &self.j
    }

    fn class_range(&self, c: usize) -> Option<(Q, Q)> {
        let js = self
            .j
            .iter()
            .zip(&self.class_of)
            .filter(|(_, &k)| k == c)
            .map(|(j, _)| j);
        let lo = js.clone().min()?.clone();
        let hi = js.max()?.clone();
        Some((lo, hi))
    }

    /// `X_i(e) = sign(i(π(e)) - j(e))` on the frame elements.
    pub fn x_of_index(&self, i: &IndexPoint) -> Result<SignVector> {
        if i.0.len() != self.families.len() {
            return Err(Error::Parse(format!(
                "index point {i} has the wrong length"
            )));
        }
        for (c, v) in i.0.iter().enumerate() {
            let (lo, hi) = self
                .class_range(c)
                .ok_or_else(|| Error::WindowTooSmall("a frame class misses the window".into()))?;
            let half = q_frac(1, 2);
            if !(v * q(2)).is_integer() || *v < lo - &half || *v > hi + &half {
                return Err(Error::WindowTooSmall(format!(
                    "index point {i} is outside the window"
                )));
            }
        }
        let signs: Vec<Sign> = self
            .j
            .iter()
            .zip(&self.class_of)
            .map(|(j, &c)| Sign::from_ordering(i.0[c].cmp(j)))
            .collect();
        Ok(SignVector::from_signs(&signs))
    }

    /// Inverse of [`BasisFrame::x_of_index`]: per class, `j` of the first
    /// member that is not `+`, less one half unless that member is zero.
    pub fn index_of_covector(&self, x: &SignVector) -> Result<IndexPoint> {
        if x.len() != self.frame_elems.len() {
            return Err(Error::GroundMismatch {
                left: x.len(),
                right: self.frame_elems.len(),
            });
        }
        let half = q_frac(1, 2);
        let mut out = Vec::new();
        for c in 0..self.families.len() {
            let mut members: Vec<(Q, Sign)> = (0..x.len())
                .filter(|&e| self.class_of[e] == c)
                .map(|e| (self.j[e].clone(), x.get(e)))
                .collect();
            members.sort();
            let rank = |s: Sign| match s {
                Sign::Plus => 0,
                Sign::Zero => 1,
                Sign::Minus => 2,
            };
            if members.windows(2).any(|w| rank(w[0].1) > rank(w[1].1))
                || members.iter().filter(|m| m.1 == Sign::Zero).count() > 1
            {
                return Err(Error::Precondition(format!(
                    "{x} is not monotone on a frame class"
                )));
            }
            let v = match members.iter().find(|m| m.1 != Sign::Plus) {
                Some((j, Sign::Zero)) => j.clone(),
                Some((j, _)) => j - &half,
                None => match members.last() {
                    Some((j, _)) => j + &half,
                    None => {
                        return Err(Error::WindowTooSmall(
                            "a frame class misses the window".into(),
                        ))
                    }
                },
            };
            out.push(v);
        }
        Ok(IndexPoint(out))
    }

    /// Index points whose every coordinate lies between the first and last
    /// window member of its class: the cells bounded inside the window.
    pub fn interior_points(&self) -> Vec<IndexPoint> {
        let mut pts = vec![Vec::new()];
        for c in 0..self.families.len() {
            let Some((lo, hi)) = self.class_range(c) else {
                return Vec::new();
            };
            let (a, b) = (floor_q(&(lo * q(2))), ceil_q(&(hi * q(2))));
            let mut next = Vec::new();
            for p in &pts {
                let mut h = a.clone();
                while h <= b {
                    let mut p2: Vec<Q> = p.clone();
                    p2.push(Q::new(h.clone(), 2.into()));
                    next.push(p2);
                    h += 1;
                }
            }
            pts = next;
        }
        pts.into_iter().map(IndexPoint).collect()
    }

    fn is_interior(&self, i: &IndexPoint) -> bool {
        i.0.iter()
            .enumerate()
            .all(|(c, v)| match self.class_range(c) {
                Some((lo, hi)) => lo <= *v && *v <= hi,
                None => false,
            })
    }

    /// Checks that `i ↦ X_i` is an order isomorphism from the interior
    /// index points onto the interior frame covectors, with both round trips.
    pub fn check_isomorphism(&self) -> Result<FrameCertificate> {
        let points = self.interior_points();
        let mut table = Vec::new();
        let mut failure = None;
        for i in &points {
            let x = self.x_of_index(i)?;
            if !self.frame.contains(&x) {
                failure.get_or_insert(format!("{x} from {i} is not a frame covector"));
            } else if self.index_of_covector(&x)? != *i {
                failure.get_or_insert(format!("{i} does not survive the round trip"));
            }
            table.push((i.clone(), x));
        }
        let by_vector: HashMap<&SignVector, &IndexPoint> =
            table.iter().map(|(i, x)| (x, i)).collect();
        for x in self.frame.iter() {
            let i = self.index_of_covector(x)?;
            if self.is_interior(&i) && by_vector.get(x) != Some(&&i) {
                failure.get_or_insert(format!("{x} does not survive the round trip"));
            }
        }
        for (a, xa) in &table {
            for (b, xb) in &table {
                if index_leq(a, b) != xa.leq(xb) {
                    failure.get_or_insert(format!("order differs between {a} and {b}"));
                }
            }
        }
        Ok(FrameCertificate {
            families: self.family_names().iter().map(|s| s.to_string()).collect(),
            table,
            failure,
        })
    }

    /// Window covectors restricting to `y` on the frame, and the length of
    /// the order ideal they generate.
    pub fn fiber(&self, y: &SignVector) -> Result<Fiber> {
        if !self.frame.contains(y) {
            return Err(Error::Precondition(format!("{y} is not a frame covector")));
        }
        let members: Vec<SignVector> = self
            .system
            .iter()
            .filter(|x| x.restrict(&self.frame_elems) == *y)
            .cloned()
            .collect();
        let mut ideal: Vec<&SignVector> = self
            .system
            .iter()
            .filter(|z| members.iter().any(|x| z.leq(x)))
            .collect();
        ideal.sort_by_key(|z| z.support().count());
        let mut longest = vec![0usize; ideal.len()];
        for a in 0..ideal.len() {
            for b in 0..a {
                if ideal[b] != ideal[a] && ideal[b].leq(ideal[a]) {
                    longest[a] = longest[a].max(longest[b] + 1);
                }
            }
        }
        Ok(Fiber {
            members,
            length: longest.into_iter().max().unwrap_or(0),
            rank: self.index_of_covector(y)?.rank(),
        })
    }
}

/// Signed count of family members with position in `[P0, P)`, where `P0`
/// is the position of step 0 of the family's first orbit.
fn family_index(p: &PeriodicArrangement, family: usize, position: &Q) -> Q {
    let base = &p.reps()[family].normal;
    let k = base.iter().position(|x| !x.is_zero()).unwrap();
    let p0 = p.offset(family, 0);
    let count = |a: &Q, b: &Q| -> Q {
        let mut n = Q::zero();
        for o in p.parallel_orbits(family) {
            let lam = &p.reps()[o].normal[k] / &base[k];
            let alpha = &p.reps()[o].offset / &lam;
            let beta = p.orbit_step(o) / &lam;
            let (ta, tb) = ((a - &alpha) / &beta, (b - &alpha) / &beta);
            n += if beta.is_positive() {
                Q::from_integer(ceil_q(&tb) - ceil_q(&ta))
            } else {
                Q::from_integer(floor_q(&ta) - floor_q(&tb))
            };
        }
        n
    };
    if *position >= p0 {
        count(&p0, position)
    } else {
        -count(position, &p0)
    }
}

#[derive(Clone, Debug)]
pub struct FrameCertificate {
    pub families: Vec<String>,
    pub table: Vec<(IndexPoint, SignVector)>,
    pub failure: Option<String>,
}

impl FrameCertificate {
    pub fn holds(&self) -> bool {
        self.failure.is_none()
    }

    pub fn to_json(&self) -> Value {
        let table: BTreeMap<String, String> = self
            .table
            .iter()
            .map(|(i, x)| (i.to_string(), x.to_string()))
            .collect();
        json!({
            "families": self.families,
            "isomorphism": self.holds(),
            "failure": self.failure,
            "points": self.table.len(),
            "table": table,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fiber {
    pub members: Vec<SignVector>,
    /// Length of the order ideal generated by the members.
    pub length: usize,
    /// Rank of the frame covector.
    pub rank: usize,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::realize::examples::{coordinate_grid, half_points, integer_points, triangular};
    use crate::realize::DEFAULT_SEED;

    fn line() -> BasisFrame {
        BasisFrame::new(&integer_points(), &[0], &[(q(-1), q(1))], DEFAULT_SEED).unwrap()
    }

    #[test]
    fn one_dimensional_maps() {
        let f = line();
        assert_eq!(
            f.frame_system().ground().label(&ElemSet::full(3)),
            "a@-1,a@0,a@1"
        );
        assert_eq!(
            f.x_of_index(&IndexPoint::from_halves(&[0]))
                .unwrap()
                .to_string(),
            "+0-"
        );
        assert_eq!(
            f.x_of_index(&IndexPoint::from_halves(&[1]))
                .unwrap()
                .to_string(),
            "++-"
        );
        let x = SignVector::parse("++-").unwrap();
        assert_eq!(
            f.index_of_covector(&x).unwrap(),
            IndexPoint::from_halves(&[1])
        );
        assert!(f
            .index_of_covector(&SignVector::parse("-+-").unwrap())
            .is_err());
        assert!(f.x_of_index(&IndexPoint::from_halves(&[5])).is_err());
    }

    #[test]
    fn fence_poset_on_five_points() {
        let f = line();
        let pts = f.interior_points();
        assert_eq!(
            pts,
            [-2, -1, 0, 1, 2]
                .map(|h| IndexPoint::from_halves(&[h]))
                .to_vec()
        );
        let p = index_poset(&pts).unwrap();
        assert_eq!(p.covers().len(), 4);
        assert_eq!(p.minimal().len(), 3);
        assert!(f.check_isomorphism().unwrap().holds());
    }

    #[test]
    fn anchoring_with_two_orbits_per_class() {
        let f = BasisFrame::new(&half_points(), &[0], &[(q(-1), q(1))], DEFAULT_SEED).unwrap();
        let names = f.frame_system().ground().names().to_vec();
        let j: BTreeMap<String, Q> = names
            .into_iter()
            .zip(f.j_values().iter().cloned())
            .collect();
        assert_eq!(j["a@0"], q(0));
        assert_eq!(j["b@0"], q(1));
        assert_eq!(j["a@1"], q(2));
        assert_eq!(j["b@-1"], q(-1));
        assert!(f.check_isomorphism().unwrap().holds());
    }

    #[test]
    fn grid_frames() {
        let w = vec![(q(-1), q(1)), (q(-1), q(1))];
        let f = BasisFrame::greedy(&coordinate_grid(), &w, DEFAULT_SEED).unwrap();
        let c = f.check_isomorphism().unwrap();
        assert!(c.holds(), "{:?}", c.failure);
        assert_eq!(c.table.len(), 25);
        let f = BasisFrame::greedy(&triangular(), &w, DEFAULT_SEED).unwrap();
        assert_eq!(f.family_names(), ["x", "y"]);
        assert!(f.check_isomorphism().unwrap().holds());
        // A skew basis of the same arrangement.
        let f = BasisFrame::new(&triangular(), &[0, 2], &w, DEFAULT_SEED).unwrap();
        assert!(f.check_isomorphism().unwrap().holds());
        assert!(BasisFrame::new(&triangular(), &[0, 0], &w, DEFAULT_SEED).is_err());
    }

    #[test]
    fn fibers_over_a_triangulated_square() {
        let w = vec![(q(-1), q(2)), (q(-1), q(2))];
        let f = BasisFrame::greedy(&triangular(), &w, DEFAULT_SEED).unwrap();
        let y = f.x_of_index(&IndexPoint::from_halves(&[1, 1])).unwrap();
        let fib = f.fiber(&y).unwrap();
        assert_eq!(fib.members.len(), 3);
        assert_eq!((fib.length, fib.rank), (2, 2));
        let v = f.x_of_index(&IndexPoint::from_halves(&[0, 0])).unwrap();
        assert_eq!(f.fiber(&v).unwrap().members.len(), 1);
        let edge = f.x_of_index(&IndexPoint::from_halves(&[1, 0])).unwrap();
        let fib = f.fiber(&edge).unwrap();
        assert_eq!((fib.members.len(), fib.length, fib.rank), (1, 1, 1));
    }

    #[test]
    fn frame_of_itself_has_singleton_fibers() {
        let f = BasisFrame::greedy(
            &coordinate_grid(),
            &[(q(-1), q(1)), (q(-1), q(1))],
            DEFAULT_SEED,
        )
        .unwrap();
        assert!(f
            .frame_system()
            .iter()
            .all(|y| f.fiber(y).unwrap().members.len() == 1));
    }
}
