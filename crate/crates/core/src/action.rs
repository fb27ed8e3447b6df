//! Translation actions of sublattices on periodic arrangements: action
//! certificates, the orbit table `(m, rk)`, the Tutte polynomial of the
//! action, toric cell counts and the quotient of the flat semilattice.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::lattice::{saturation_index, solve_integer, sublattice_index, zvec, Lattice};
use crate::parallel::parallel_classes;
use crate::polynomial::Poly2;
use crate::poset::RankedPoset;
use crate::rational::{floor_q, inverse, mat_vec, nullspace, parse_q, q, rank, RowSpace, Q};
use crate::realize::lp::{is_feasible, Constraint, Rel};
use crate::realize::periodic::element_name;
use crate::realize::{FiniteArrangement, PeriodicArrangement, Provenance};
use crate::semimatroid::RuleReport;
use crate::sign::Sign;
use crate::system::SignSystem;

/// Largest quotient ground set for which all subsets are tabulated.
pub const MAX_ORBITS: usize = 16;
const MAX_RETRIES: u32 = 3;

/// A sublattice `Γ` of the translation lattice of a periodic arrangement,
/// acting by translation.
#[derive(Clone, Debug)]
pub struct TranslationAction {
    source: PeriodicArrangement,
    gens: Vec<Vec<i64>>,
    /// `shifts[j][o]`: how many steps generator `j` moves orbit `o`.
    shifts: Vec<Vec<i64>>,
    /// Gcd of the shifts of each orbit; the orbit splits into this many
    /// `Γ`-orbits.
    splits: Vec<i64>,
}

/// A `Γ`-orbit of elements: the translates of `orbit` whose step is
/// congruent to `residue` modulo the orbit's split.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientElement {
    pub orbit: usize,
    pub residue: i64,
    pub name: String,
}

impl TranslationAction {
    /// `gens` lists the generators of `Γ` in ambient coordinates.
    pub fn new(source: PeriodicArrangement, gens: &[Vec<Q>]) -> Result<TranslationAction> {
        let d = source.dim();
        if gens.len() != d || gens.iter().any(|g| g.len() != d) {
            return Err(Error::Parse(format!(
                "Γ needs {d} generators of length {d}"
            )));
        }
        if rank(gens) != d {
            return Err(Error::Degenerate("Γ is not full rank".into()));
        }
        let lam: Vec<Vec<BigInt>> = (0..d)
            .map(|i| {
                source
                    .lattice()
                    .iter()
                    .map(|l| BigInt::from(l[i]))
                    .collect()
            })
            .collect();
        let mut ints = Vec::new();
        for g in gens {
            let not_in = || {
                Error::Precondition(format!("generator {g:?} is not in the translation lattice"))
            };
            if g.iter().any(|x| !x.is_integer()) {
                return Err(not_in());
            }
            let gi: Vec<i64> = g
                .iter()
                .map(|x| {
                    x.to_integer()
                        .to_i64()
                        .ok_or_else(|| Error::TooLarge("generator".into()))
                })
                .collect::<Result<_>>()?;
            solve_integer(&lam, &zvec(&gi), d).ok_or_else(not_in)?;
            ints.push(gi);
        }
        let shifts: Vec<Vec<i64>> = ints
            .iter()
            .map(|g| {
                (0..source.reps().len())
                    .map(|o| source.shift(o, g))
                    .collect()
            })
            .collect::<Result<_>>()?;
        let splits = (0..source.reps().len())
            .map(|o| shifts.iter().fold(0i64, |a, s| a.gcd(&s[o])))
            .collect();
        Ok(TranslationAction {
            source,
            gens: ints,
            shifts,
            splits,
        })
    }

    /// The action of the whole translation lattice.
    pub fn full(source: PeriodicArrangement) -> TranslationAction {
        let gens: Vec<Vec<Q>> = source
            .lattice()
            .iter()
            .map(|v| v.iter().map(|&x| q(x)).collect())
            .collect();
        TranslationAction::new(source, &gens).expect("the lattice acts on itself")
    }

    pub fn source(&self) -> &PeriodicArrangement {
        &self.source
    }

    pub fn generators(&self) -> &[Vec<i64>] {
        &self.gens
    }

    /// Steps by which translation by `v` moves `orbit`.
    pub fn k_map(&self, orbit: usize, v: &[i64]) -> Result<i64> {
        if orbit >= self.source.reps().len() {
            return Err(Error::UnknownElement(format!("orbit {orbit}")));
        }
        self.source.shift(orbit, v)
    }

    /// Shift of translation by `v` on the ordered class of all translates
    /// parallel to `orbit`: the number of class members it passes.
    pub fn class_shift(&self, orbit: usize, v: &[i64]) -> Result<i64> {
        let reps = self.source.reps();
        let base = &reps[self.source.parallel_orbits(orbit)[0]].normal;
        let k = base.iter().position(|x| !x.is_zero()).unwrap();
        let mut total = 0;
        for o in self.source.parallel_orbits(orbit) {
            let s = self.k_map(o, v)?;
            total += if (&reps[o].normal[k] / &base[k]).is_negative() {
                -s
            } else {
                s
            };
        }
        Ok(total)
    }

    pub fn splits(&self) -> &[i64] {
        &self.splits
    }

    /// `[Λ : Γ]`.
    pub fn index(&self) -> BigInt {
        let d = self.source.dim();
        let lam: Vec<Vec<BigInt>> = self.source.lattice().iter().map(|v| zvec(v)).collect();
        let gens: Vec<Vec<BigInt>> = self.gens.iter().map(|v| zvec(v)).collect();
        sublattice_index(&lam, &gens, d).expect("Γ is a full-rank sublattice")
    }

    pub fn quotient_ground(&self) -> Vec<QuotientElement> {
        let mut out = Vec::new();
        for (o, h) in self.source.reps().iter().enumerate() {
            let c = self.splits[o];
            for r in 0..c {
                let name = if c == 1 {
                    h.name.clone()
                } else {
                    format!("{}[{r}]", h.name)
                };
                out.push(QuotientElement {
                    orbit: o,
                    residue: r,
                    name,
                });
            }
        }
        out
    }

    /// Bounding box of the fundamental parallelepiped of `Γ`.
    pub fn fundamental_box(&self) -> Vec<(Q, Q)> {
        (0..self.source.dim())
            .map(|i| {
                let lo: i64 = self.gens.iter().map(|g| g[i].min(0)).sum();
                let hi: i64 = self.gens.iter().map(|g| g[i].max(0)).sum();
                (q(lo), q(hi))
            })
            .collect()
    }

    fn normals_span(&self) -> bool {
        let rows: Vec<Vec<Q>> = self
            .source
            .reps()
            .iter()
            .map(|h| h.normal.clone())
            .collect();
        rank(&rows) == self.source.dim()
    }

    /// `x` modulo `Γ`, as a point of the half-open fundamental parallelepiped.
    fn reduce_point(&self, x: &[Q]) -> Vec<Q> {
        let d = self.source.dim();
        let g: Vec<Vec<Q>> = (0..d)
            .map(|i| self.gens.iter().map(|v| q(v[i])).collect())
            .collect();
        let inv = inverse(&g).expect("Γ is full rank");
        let c: Vec<Q> = mat_vec(&inv, x)
            .into_iter()
            .map(|t| {
                let f = Q::from_integer(floor_q(&t));
                t - f
            })
            .collect();
        mat_vec(&g, &c)
    }

    /// Shift lattice of `Γ` on the step coordinates of `orbits`.
    fn step_lattice(&self, orbits: &[usize]) -> Lattice {
        let gens: Vec<Vec<BigInt>> = self
            .shifts
            .iter()
            .map(|s| orbits.iter().map(|&o| BigInt::from(s[o])).collect())
            .collect();
        Lattice::new(&gens, orbits.len())
    }

    /// `m` and `rk` for the quotient elements `members`, or `None` when no
    /// central set has exactly these orbits.
    fn table_entry(&self, members: &[&QuotientElement]) -> Result<Option<TableEntry>> {
        let k = members.len();
        let orbits: BTreeSet<usize> = members.iter().map(|e| e.orbit).collect();
        if orbits.len() < k {
            // Distinct translates of one orbit are disjoint.
            return Ok(None);
        }
        let reps = self.source.reps();
        let d = self.source.dim();
        let normals: Vec<Vec<Q>> = members
            .iter()
            .map(|e| reps[e.orbit].normal.clone())
            .collect();
        let rk = rank(&normals);
        // Steps m_i = r_i + c_i·t_i; the hyperplanes meet iff the offsets
        // satisfy every linear relation among the normals.
        let transposed: Vec<Vec<Q>> = (0..d)
            .map(|c| normals.iter().map(|n| n[c].clone()).collect())
            .collect();
        let mut a = Vec::new();
        let mut h = Vec::new();
        for w in nullspace(&transposed, k) {
            let mut coeffs = Vec::with_capacity(k);
            let mut rhs = Q::zero();
            for (i, e) in members.iter().enumerate() {
                let step = self.source.orbit_step(e.orbit);
                coeffs.push(&w[i] * step * q(self.splits[e.orbit]));
                rhs -= &w[i] * self.source.offset(e.orbit, e.residue);
            }
            let den = coeffs
                .iter()
                .chain(std::iter::once(&rhs))
                .fold(BigInt::from(1), |l, x| l.lcm(x.denom()));
            let scale = Q::from_integer(den);
            a.push(coeffs.iter().map(|x| (x * &scale).to_integer()).collect());
            h.push((rhs * &scale).to_integer());
        }
        let Some((_, kernel)) = solve_integer(&a, &h, k) else {
            return Ok(None);
        };
        let gens: Vec<Vec<BigInt>> = self
            .shifts
            .iter()
            .map(|s| {
                members
                    .iter()
                    .map(|e| BigInt::from(s[e.orbit] / self.splits[e.orbit]))
                    .collect()
            })
            .collect();
        let m = sublattice_index(&kernel, &gens, k).ok_or_else(|| {
            Error::Precondition("translates of a central set are not cocompact".into())
        })?;
        let m = m
            .to_u64()
            .ok_or_else(|| Error::TooLarge("orbit count".into()))?;
        Ok(Some(TableEntry { m, rk }))
    }
}

/// Reads generators written as `"1,0;0,2"`, one row per generator.
pub fn parse_gamma(s: &str) -> Result<Vec<Vec<Q>>> {
    s.split(';')
        .map(|row| row.split(',').map(|x| parse_q(x.trim())).collect())
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TableEntry {
    pub m: u64,
    pub rk: usize,
}

/// Orbit counts `m` and maximal ranks `rk` per set of quotient elements.
/// Sets with `m = 0` are absent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GSemimatroidTable {
    ground_orbits: Vec<String>,
    rows: BTreeMap<Vec<usize>, TableEntry>,
}

impl GSemimatroidTable {
    /// Checks that rows are sorted index sets closed under taking subsets,
    /// that the empty set has `m = 1, rk = 0`, and that adding an element
    /// raises `rk` by at most one and never lowers it.
    pub fn new(
        ground_orbits: Vec<String>,
        rows: impl IntoIterator<Item = (Vec<usize>, TableEntry)>,
    ) -> Result<GSemimatroidTable> {
        let n = ground_orbits.len();
        if n > MAX_ORBITS {
            return Err(Error::TooLarge(format!("{n} quotient elements")));
        }
        let rows: BTreeMap<Vec<usize>, TableEntry> = rows.into_iter().collect();
        for (set, e) in &rows {
            if set.windows(2).any(|w| w[0] >= w[1]) || set.iter().any(|&i| i >= n) {
                return Err(Error::Parse(format!("bad index set {set:?}")));
            }
            if e.m == 0 {
                return Err(Error::Parse(format!(
                    "row {set:?} has m = 0; omit it instead"
                )));
            }
            for i in 0..set.len() {
                let mut sub = set.clone();
                sub.remove(i);
                let Some(below) = rows.get(&sub) else {
                    return Err(Error::Precondition(format!(
                        "row {set:?} present but {sub:?} missing"
                    )));
                };
                if below.rk > e.rk || e.rk > below.rk + 1 {
                    return Err(Error::Precondition(format!(
                        "rank jumps from {sub:?} to {set:?}"
                    )));
                }
            }
        }
        match rows.get(&Vec::new()) {
            Some(TableEntry { m: 1, rk: 0 }) => {}
            _ => {
                return Err(Error::Precondition(
                    "the empty set needs m = 1, rk = 0".into(),
                ))
            }
        }
        Ok(GSemimatroidTable {
            ground_orbits,
            rows,
        })
    }

    pub fn ground_orbits(&self) -> &[String] {
        &self.ground_orbits
    }

    pub fn rows(&self) -> &BTreeMap<Vec<usize>, TableEntry> {
        &self.rows
    }

    pub fn get(&self, set: &[usize]) -> Option<TableEntry> {
        self.rows.get(set).copied()
    }

    /// `rk` of the whole quotient ground set, read as the largest rank of
    /// any central set.
    pub fn rank(&self) -> usize {
        self.rows.values().map(|e| e.rk).max().unwrap_or(0)
    }

    pub fn tutte_polynomial(&self) -> Poly2 {
        let r = self.rank();
        let xm = &Poly2::x() - &Poly2::constant(1);
        let ym = &Poly2::y() - &Poly2::constant(1);
        let mut t = Poly2::zero();
        for (set, e) in &self.rows {
            let term = &xm.pow((r - e.rk) as u32) * &ym.pow((set.len() - e.rk) as u32);
            t = &t + &(&term * &Poly2::constant(e.m as i64));
        }
        t
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|(set, e)| {
                let names: Vec<&str> = set
                    .iter()
                    .map(|&i| self.ground_orbits[i].as_str())
                    .collect();
                json!({"A": names, "m": e.m, "rk": e.rk})
            })
            .collect();
        json!({"ground_orbits": self.ground_orbits, "rows": rows})
    }

    pub fn from_json(text: &str) -> Result<GSemimatroidTable> {
        let v: Value = serde_json::from_str(text)?;
        let ground: Vec<String> = v
            .get("ground_orbits")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("missing \"ground_orbits\"".into()))?
            .iter()
            .map(|x| {
                x.as_str()
                    .map(str::to_string)
                    .ok_or_else(|| Error::Parse(format!("orbit name {x} is not a string")))
            })
            .collect::<Result<_>>()?;
        let g = crate::system::GroundSet::new(ground.clone())?;
        let rows = v
            .get("rows")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("missing \"rows\"".into()))?;
        let mut out = Vec::new();
        for (i, r) in rows.iter().enumerate() {
            let field = |k: &str| {
                r.get(k).and_then(Value::as_u64).ok_or_else(|| {
                    Error::Parse(format!("row {i}: \"{k}\" must be a non-negative integer"))
                })
            };
            let names = r
                .get("A")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Parse(format!("row {i}: missing \"A\"")))?;
            let mut set = Vec::new();
            for x in names {
                let s = x
                    .as_str()
                    .ok_or_else(|| Error::Parse(format!("row {i}: bad name {x}")))?;
                set.push(g.index_of(s)?);
            }
            set.sort_unstable();
            let (m, rk) = (field("m")?, field("rk")? as usize);
            if m > 0 {
                out.push((set, TableEntry { m, rk }));
            }
        }
        GSemimatroidTable::new(ground, out)
    }
}

/// The orbit table of an action, computed by solving for integer step
/// vectors of intersecting translates.
pub fn gsemimatroid_table(t: &TranslationAction) -> Result<GSemimatroidTable> {
    let ground = t.quotient_ground();
    let n = ground.len();
    if n > MAX_ORBITS {
        return Err(Error::TooLarge(format!("{n} quotient elements")));
    }
    let rows: Vec<(Vec<usize>, TableEntry)> = (0u32..1 << n)
        .into_par_iter()
        .map(|mask| {
            let set: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            let members: Vec<&QuotientElement> = set.iter().map(|&i| &ground[i]).collect();
            Ok(t.table_entry(&members)?.map(|e| (set, e)))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    GSemimatroidTable::new(ground.into_iter().map(|e| e.name).collect(), rows)
}

pub fn tutte_polynomial(table: &GSemimatroidTable) -> Poly2 {
    table.tutte_polynomial()
}

/// Arithmetic Tutte polynomial of the integer characters given as the
/// columns of `n`; the multiplicity of a set of columns is the index of the
/// lattice they span in its saturation.
pub fn arithmetic_tutte_from_matrix(n: &[Vec<i64>]) -> Result<Poly2> {
    let d = n.len();
    let cols = n.first().map_or(0, Vec::len);
    if n.iter().any(|r| r.len() != cols) {
        return Err(Error::Parse("character matrix is not rectangular".into()));
    }
    if cols > MAX_ORBITS {
        return Err(Error::TooLarge(format!("{cols} characters")));
    }
    let col = |j: usize| -> Vec<BigInt> { n.iter().map(|r| BigInt::from(r[j])).collect() };
    if (0..cols).any(|j| col(j).iter().all(Zero::is_zero)) {
        return Err(Error::Degenerate("zero character".into()));
    }
    let qrank = |set: &[usize]| {
        let rows: Vec<Vec<Q>> = set
            .iter()
            .map(|&j| n.iter().map(|r| q(r[j])).collect())
            .collect();
        rank(&rows)
    };
    let all: Vec<usize> = (0..cols).collect();
    let r = qrank(&all);
    let xm = &Poly2::x() - &Poly2::constant(1);
    let ym = &Poly2::y() - &Poly2::constant(1);
    let mut t = Poly2::zero();
    for mask in 0u32..1 << cols {
        let set: Vec<usize> = (0..cols).filter(|i| mask >> i & 1 == 1).collect();
        let rk = qrank(&set);
        let vecs: Vec<Vec<BigInt>> = set.iter().map(|&j| col(j)).collect();
        let m = saturation_index(&vecs, d)
            .to_i64()
            .ok_or_else(|| Error::TooLarge("multiplicity".into()))?;
        let term = &xm.pow((r - rk) as u32) * &ym.pow((set.len() - rk) as u32);
        t = &t + &(&term * &Poly2::constant(m));
    }
    Ok(t)
}

/// Cell orbits of the quotient of a periodic arrangement by `Γ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToricCensus {
    pub dim: usize,
    /// Number of cell orbits per cell dimension.
    pub by_dim: BTreeMap<usize, usize>,
    /// Padding (in lattice units around the fundamental box) that sufficed.
    pub padding: i64,
    /// Dimension and barycentre modulo `Γ` of one cell per orbit.
    pub cells: Vec<(usize, Vec<Q>)>,
}

impl ToricCensus {
    pub fn chambers(&self) -> usize {
        self.by_dim.get(&self.dim).copied().unwrap_or(0)
    }

    /// `Σ (-1)^dim · count`; zero for a torus.
    pub fn euler(&self) -> i64 {
        self.by_dim
            .iter()
            .map(|(&k, &c)| if k % 2 == 0 { c as i64 } else { -(c as i64) })
            .sum()
    }

    pub fn to_json(&self) -> Value {
        let by_dim: BTreeMap<String, usize> = self
            .by_dim
            .iter()
            .map(|(k, v)| (k.to_string(), *v))
            .collect();
        json!({
            "cells_by_dim": by_dim,
            "chambers": self.chambers(),
            "euler": self.euler(),
            "padding": self.padding,
        })
    }
}

fn box_constraints(bx: &[(Q, Q)], rel: Rel) -> Vec<Constraint> {
    let d = bx.len();
    let mut out = Vec::new();
    for (k, (lo, hi)) in bx.iter().enumerate() {
        let mut e = vec![Q::zero(); d];
        e[k] = q(1);
        out.push(Constraint::new(e.clone(), -lo.clone(), rel));
        out.push(Constraint::new(
            e.iter().map(|x| -x).collect(),
            hi.clone(),
            rel,
        ));
    }
    out
}

fn padded(bx: &[(Q, Q)], pad: i64) -> Vec<(Q, Q)> {
    bx.iter()
        .map(|(lo, hi)| (lo - q(pad), hi + q(pad)))
        .collect()
}

/// Counts cell orbits by enumerating a padded window around a fundamental
/// domain. Only cells lying wholly inside the window are kept; if a cell
/// meeting the fundamental box leaves the window the padding is doubled.
pub fn toric_face_census(t: &TranslationAction, seed: u64) -> Result<ToricCensus> {
    if !t.normals_span() {
        return Err(Error::Precondition(
            "normals do not span; cells are unbounded".into(),
        ));
    }
    let inner = t.fundamental_box();
    let mut pad = inner
        .iter()
        .map(|(lo, hi)| ((hi - lo) / q(2)).ceil().to_integer().to_i64().unwrap_or(1))
        .max()
        .unwrap_or(1)
        .max(1);
    for _ in 0..=MAX_RETRIES {
        match census_in_window(t, &inner, pad, seed) {
            Err(Error::WindowTooSmall(_)) => pad *= 2,
            other => return other,
        }
    }
    Err(Error::WindowTooSmall(format!(
        "cells still leave the window at padding {}",
        pad / 2
    )))
}

fn census_in_window(
    t: &TranslationAction,
    inner: &[(Q, Q)],
    pad: i64,
    seed: u64,
) -> Result<ToricCensus> {
    let d = t.source.dim();
    let outer = padded(inner, pad);
    let (arr, _) = t.source.window_restrict(&outer)?;
    let cov = arr.covectors(seed)?;
    let dims: Vec<usize> = cov
        .iter()
        .map(|x| {
            d - arr
                .intersection_rank(&x.zero_set().to_vec())
                .expect("covector")
        })
        .collect();
    let vertices: Vec<(usize, Vec<Q>)> = cov
        .iter()
        .enumerate()
        .filter(|&(i, _)| dims[i] == 0)
        .map(|(i, v)| (i, arr.cell_point(v).expect("vertex")))
        .collect();
    let inner_c = box_constraints(inner, Rel::Ge);
    let found: Vec<Option<(usize, Vec<Q>)>> = cov
        .vectors()
        .par_iter()
        .enumerate()
        .map(|(i, x)| {
            let cell = arr.constraints_for(x);
            let with = |extra: &[Constraint]| {
                let mut c = cell.clone();
                c.extend_from_slice(extra);
                is_feasible(d, &c)
            };
            if !with(&inner_c) {
                return Ok(None);
            }
            // The closure must stay in the window: nothing beyond any face.
            for c in box_constraints(&outer, Rel::Ge) {
                let beyond =
                    Constraint::new(c.coeffs.iter().map(|x| -x).collect(), -c.constant, Rel::Gt);
                if with(&[beyond]) {
                    return Err(Error::WindowTooSmall(format!("cell {x} leaves the window")));
                }
            }
            let vs: Vec<&Vec<Q>> = vertices
                .iter()
                .filter(|(j, _)| cov.vectors()[*j].leq(x))
                .map(|(_, p)| p)
                .collect();
            if vs.is_empty() {
                return Err(Error::Degenerate(format!(
                    "bounded cell {x} without vertices"
                )));
            }
            let n = q(vs.len() as i64);
            let bary: Vec<Q> = (0..d)
                .map(|k| vs.iter().map(|p| p[k].clone()).sum::<Q>() / &n)
                .collect();
            Ok(Some((dims[i], t.reduce_point(&bary))))
        })
        .collect::<Result<_>>()?;
    let cells: BTreeSet<(usize, Vec<Q>)> = found.into_iter().flatten().collect();
    let mut by_dim = BTreeMap::new();
    for (k, _) in &cells {
        *by_dim.entry(*k).or_insert(0) += 1;
    }
    Ok(ToricCensus {
        dim: d,
        by_dim,
        padding: pad,
        cells: cells.into_iter().collect(),
    })
}

pub fn toric_chamber_count(t: &TranslationAction, seed: u64) -> Result<usize> {
    Ok(toric_face_census(t, seed)?.chambers())
}

/// A `Γ`-orbit of flats: the elements of one representative as
/// `(orbit, step)`, with steps reduced modulo the shift lattice.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct FlatOrbit {
    pub rank: usize,
    pub members: Vec<(usize, BigInt)>,
}

impl FlatOrbit {
    pub fn label(&self, p: &PeriodicArrangement) -> String {
        let names: Vec<String> = self
            .members
            .iter()
            .map(|(o, m)| element_name(&p.reps()[*o].name, m.to_i64().unwrap_or(i64::MAX)))
            .collect();
        format!("{{{}}}", names.join(","))
    }
}

fn flat_of(
    t: &TranslationAction,
    arr: &FiniteArrangement,
    zero: &[usize],
    x: &[Q],
) -> (Vec<usize>, Vec<BigInt>, usize) {
    let rows: Vec<Vec<Q>> = zero
        .iter()
        .map(|&i| arr.hyperplanes()[i].normal.clone())
        .collect();
    let span = RowSpace::new(&rows);
    let mut orbits = Vec::new();
    let mut steps = Vec::new();
    for (o, h) in t.source.reps().iter().enumerate() {
        if !zero.is_empty() && span.contains(&h.normal) {
            if let Some(m) = t.source.contains_point(o, x) {
                orbits.push(o);
                steps.push(BigInt::from(m));
            }
        }
    }
    (orbits, steps, span.dim())
}

/// The poset of flat orbits, ordered by `GX ≤ GY` iff `X ⊆ gY` for some
/// `g ∈ Γ`, together with the orbits in poset order.
pub fn quotient_flats(t: &TranslationAction, seed: u64) -> Result<(RankedPoset, Vec<FlatOrbit>)> {
    let outer = padded(&t.fundamental_box(), 1);
    let (arr, _) = t.source.window_restrict(&outer)?;
    let cov = arr.covectors(seed)?;
    let mut by_zero: HashMap<Vec<usize>, &crate::sign::SignVector> = HashMap::new();
    for x in cov.iter() {
        by_zero.entry(x.zero_set().to_vec()).or_insert(x);
    }
    let found: Vec<FlatOrbit> = by_zero
        .into_par_iter()
        .map(|(zero, x)| {
            let p = arr.cell_point(x).expect("covector");
            let (orbits, steps, rank) = flat_of(t, &arr, &zero, &p);
            let red = t.step_lattice(&orbits).reduce(&steps);
            FlatOrbit {
                rank,
                members: orbits.into_iter().zip(red).collect(),
            }
        })
        .collect();
    let flats: Vec<FlatOrbit> = found
        .into_iter()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let lattices: Vec<Lattice> = flats
        .iter()
        .map(|f| t.step_lattice(&f.members.iter().map(|(o, _)| *o).collect::<Vec<_>>()))
        .collect();
    let labels: Vec<String> = flats.iter().map(|f| f.label(&t.source)).collect();
    let poset = RankedPoset::from_relation(labels, |i, j| {
        let (a, b) = (&flats[i], &flats[j]);
        let mut diff = Vec::with_capacity(a.members.len());
        for (o, m) in &a.members {
            match b.members.iter().find(|(p, _)| p == o) {
                Some((_, n)) => diff.push(m - n),
                None => return false,
            }
        }
        lattices[i].contains(&diff)
    })?;
    Ok((poset, flats))
}

/// Both sides of `χ_{L/Γ}(t) = (-1)^r T(1-t, 0)`, as polynomials in the
/// first variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacteristicCheck {
    pub chi: Poly2,
    pub rhs: Poly2,
}

impl CharacteristicCheck {
    pub fn holds(&self) -> bool {
        self.chi == self.rhs
    }
}

pub fn verify_characteristic_identity(
    t: &TranslationAction,
    seed: u64,
) -> Result<CharacteristicCheck> {
    let (poset, _) = quotient_flats(t, seed)?;
    let chi = poset.characteristic_polynomial()?;
    let table = gsemimatroid_table(t)?;
    let tp = table.tutte_polynomial();
    let one_minus = &Poly2::constant(1) - &Poly2::x();
    let mut rhs = tp.compose(&one_minus, &Poly2::zero());
    if table.rank() % 2 == 1 {
        rhs = -&rhs;
    }
    Ok(CharacteristicCheck { chi, rhs })
}

/// Checks on a window that `Γ` keeps every element in its parallelism
/// class, moves every sufficiently interior covector, and never makes an
/// element central together with a distinct translate.
pub fn certify_action(
    t: &TranslationAction,
    window: &[(Q, Q)],
    seed: u64,
) -> Result<Vec<RuleReport>> {
    for ((lo, hi), (flo, fhi)) in window.iter().zip(t.fundamental_box()) {
        if hi - lo < (fhi - flo) * q(2) {
            return Err(Error::WindowTooSmall(
                "need two fundamental domains per axis".into(),
            ));
        }
    }
    let (arr, prov) = t.source.window_restrict(window)?;
    let s = arr.covectors(seed)?;
    let index: HashMap<Provenance, usize> = prov.iter().enumerate().map(|(i, p)| (*p, i)).collect();
    let name = |i: usize| s.ground().name(i).to_string();

    let classes = parallel_classes(&s)?;
    let mut class_of = vec![0; prov.len()];
    for (c, cl) in classes.iter().enumerate() {
        for &e in &cl.members {
            class_of[e] = c;
        }
    }
    // Pairs (e, γe) inside the window, per generator.
    let pairs: Vec<Vec<(usize, usize)>> = t
        .shifts
        .iter()
        .map(|sh| {
            prov.iter()
                .enumerate()
                .filter_map(|(i, p)| {
                    let img = Provenance {
                        orbit: p.orbit,
                        step: p.step + sh[p.orbit],
                    };
                    index.get(&img).map(|&j| (i, j))
                })
                .collect()
        })
        .collect();

    let sliding = pairs
        .iter()
        .flatten()
        .find(|&&(i, j)| class_of[i] != class_of[j])
        .map(|&(i, j)| {
            format!(
                "{} and its translate {} lie in different classes",
                name(i),
                name(j)
            )
        });

    let translative = pairs
        .iter()
        .flatten()
        .filter(|(i, j)| i != j)
        .find_map(|&(i, j)| {
            s.iter()
                .find(|x| x.get(i) == Sign::Zero && x.get(j) == Sign::Zero)
                .map(|x| format!("{x} vanishes on {} and its translate {}", name(i), name(j)))
        });

    let free = free_witness(t, &s, &prov, &pairs);
    Ok(vec![
        RuleReport::new("sliding", sliding),
        RuleReport::new("free", free),
        RuleReport::new("translative", translative),
    ])
}

fn free_witness(
    t: &TranslationAction,
    s: &SignSystem,
    prov: &[Provenance],
    pairs: &[Vec<(usize, usize)>],
) -> Option<String> {
    let norbits = t.source.reps().len();
    for x in s.iter() {
        // Only covectors whose position along each moved orbit is visible
        // far enough from the window edge are checked.
        let mut plus = vec![0i64; norbits];
        let mut minus = vec![0i64; norbits];
        for (i, p) in prov.iter().enumerate() {
            match x.get(i) {
                Sign::Plus => plus[p.orbit] += 1,
                Sign::Minus => minus[p.orbit] += 1,
                Sign::Zero => {}
            }
        }
        let interior = t.shifts.iter().all(|sh| {
            (0..norbits).all(|o| sh[o] == 0 || (plus[o] >= sh[o].abs() && minus[o] >= sh[o].abs()))
        });
        if !interior {
            continue;
        }
        for (j, pr) in pairs.iter().enumerate() {
            if !pr.iter().any(|&(a, b)| x.get(a) != x.get(b)) {
                return Some(format!("{x} is fixed by generator {:?}", t.gens[j]));
            }
        }
    }
    None
}
