//! Exact feasibility of mixed strict/non-strict linear systems by
//! Fourier–Motzkin elimination, with a witness point.
//!
//! Intended for the small dimensions of arrangement realizations (at most a
//! handful of variables); constraint counts grow quadratically per
//! eliminated variable, tempered by merging parallel constraints.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::{q, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rel {
    /// `= 0`
    Eq,
    /// `>= 0`
    Ge,
    /// `> 0`
    Gt,
}

/// `coeffs · x + constant  REL  0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<Q>,
    pub constant: Q,
    pub rel: Rel,
}

impl Constraint {
    pub fn new(coeffs: Vec<Q>, constant: Q, rel: Rel) -> Constraint {
        Constraint {
            coeffs,
            constant,
            rel,
        }
    }

    fn is_trivial(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    fn trivially_holds(&self) -> bool {
        match self.rel {
            Rel::Eq => self.constant.is_zero(),
            Rel::Ge => !self.constant.is_negative(),
            Rel::Gt => self.constant.is_positive(),
        }
    }

    /// Scales to coprime integer coefficients with the same solution set.
    fn normalize(&mut self) {
        let den = self
            .coeffs
            .iter()
            .chain(std::iter::once(&self.constant))
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .chain(std::iter::once(&self.constant))
            .map(|x| (x * Q::from_integer(den.clone())).to_integer())
            .collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, n| acc.gcd(n));
        if g.is_zero() {
            return;
        }
        let n = self.coeffs.len();
        for (i, v) in ints.into_iter().enumerate() {
            let v = Q::from_integer(v / &g);
            if i < n {
                self.coeffs[i] = v;
            } else {
                self.constant = v;
            }
        }
    }

    pub fn holds_at(&self, x: &[Q]) -> bool {
        let v: Q = self.coeffs.iter().zip(x).map(|(a, b)| a * b).sum::<Q>() + &self.constant;
        match self.rel {
            Rel::Eq => v.is_zero(),
            Rel::Ge => !v.is_negative(),
            Rel::Gt => v.is_positive(),
        }
    }
}

/// Keeps the tightest constraint per normalized coefficient vector.
fn merge(cs: Vec<Constraint>) -> Option<Vec<Constraint>> {
    let mut best: HashMap<Vec<Q>, Constraint> = HashMap::new();
    let mut order: Vec<Vec<Q>> = Vec::new();
    for mut c in cs {
        if c.is_trivial() {
            if !c.trivially_holds() {
                return None;
            }
            continue;
        }
        c.normalize();
        match best.get_mut(&c.coeffs) {
            Some(b) => {
                if c.constant < b.constant || (c.constant == b.constant && c.rel > b.rel) {
                    *b = c;
                }
            }
            None => {
                order.push(c.coeffs.clone());
                best.insert(c.coeffs.clone(), c);
            }
        }
    }
    Some(
        order
            .into_iter()
            .map(|k| best.remove(&k).unwrap())
            .collect(),
    )
}

struct Substitution {
    var: usize,
    /// `x_var = coeffs · x + constant`, with `coeffs[var] == 0`.
    coeffs: Vec<Q>,
    constant: Q,
}

fn substitute(c: &mut Constraint, s: &Substitution) {
    let a = std::mem::replace(&mut c.coeffs[s.var], Q::zero());
    if a.is_zero() {
        return;
    }
    for (x, y) in c.coeffs.iter_mut().zip(&s.coeffs) {
        *x += &a * y;
    }
    c.constant += &a * &s.constant;
}

/// A point satisfying every constraint, or `None` when the system is
/// infeasible.
pub fn feasible_point(dim: usize, constraints: &[Constraint]) -> Option<Vec<Q>> {
    let mut eqs: Vec<Constraint> = Vec::new();
    let mut ineqs: Vec<Constraint> = Vec::new();
    for c in constraints {
        assert_eq!(c.coeffs.len(), dim, "constraint dimension");
        if c.rel == Rel::Eq {
            eqs.push(c.clone());
        } else {
            ineqs.push(c.clone());
        }
    }

    let mut subs: Vec<Substitution> = Vec::new();
    while let Some(c) = eqs.pop() {
        if c.is_trivial() {
            if !c.trivially_holds() {
                return None;
            }
            continue;
        }
        let v = c.coeffs.iter().position(|x| !x.is_zero()).unwrap();
        let inv = -c.coeffs[v].recip();
        let mut coeffs: Vec<Q> = c.coeffs.iter().map(|x| x * &inv).collect();
        coeffs[v] = Q::zero();
        let s = Substitution {
            var: v,
            coeffs,
            constant: &c.constant * &inv,
        };
        for e in eqs.iter_mut().chain(ineqs.iter_mut()) {
            substitute(e, &s);
        }
        subs.push(s);
    }

    let eliminated: Vec<bool> = {
        let mut e = vec![false; dim];
        for s in &subs {
            e[s.var] = true;
        }
        e
    };
    let free: Vec<usize> = (0..dim).filter(|&i| !eliminated[i]).collect();

    // levels[k] holds the constraints before eliminating free[k].
    let mut levels: Vec<Vec<Constraint>> = Vec::new();
    let mut cur = merge(ineqs)?;
    for &v in &free {
        levels.push(cur.clone());
        let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), Vec::new());
        for c in cur {
            if c.coeffs[v].is_positive() {
                pos.push(c);
            } else if c.coeffs[v].is_negative() {
                neg.push(c);
            } else {
                rest.push(c);
            }
        }
        for p in &pos {
            for n in &neg {
                let (a, b) = (p.coeffs[v].clone(), -n.coeffs[v].clone());
                let coeffs = p
                    .coeffs
                    .iter()
                    .zip(&n.coeffs)
                    .map(|(x, y)| x * &b + y * &a)
                    .collect();
                let constant = &p.constant * &b + &n.constant * &a;
                let rel = p.rel.max(n.rel);
                rest.push(Constraint::new(coeffs, constant, rel));
            }
        }
        cur = merge(rest)?;
    }
    // Every remaining constraint is trivial and was checked by merge.

    let mut x = vec![Q::zero(); dim];
    for (k, &v) in free.iter().enumerate().rev() {
        x[v] = choose_value(&levels[k], v, &x)?;
    }
    for s in subs.iter().rev() {
        x[s.var] = s.coeffs.iter().zip(&x).map(|(a, b)| a * b).sum::<Q>() + &s.constant;
    }
    debug_assert!(constraints.iter().all(|c| c.holds_at(&x)));
    Some(x)
}

/// Picks `x[v]` inside the bounds imposed by `cs` given the later variables.
fn choose_value(cs: &[Constraint], v: usize, x: &[Q]) -> Option<Q> {
    let mut lo: Option<(Q, bool)> = None;
    let mut hi: Option<(Q, bool)> = None;
    for c in cs {
        let a = &c.coeffs[v];
        if a.is_zero() {
            continue;
        }
        let r: Q = c
            .coeffs
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != v)
            .map(|(i, ci)| ci * &x[i])
            .sum::<Q>()
            + &c.constant;
        let bound = -r / a;
        let strict = c.rel == Rel::Gt;
        if a.is_positive() {
            if lo
                .as_ref()
                .is_none_or(|(b, s)| bound > *b || (bound == *b && strict && !s))
            {
                lo = Some((bound, strict));
            }
        } else if hi
            .as_ref()
            .is_none_or(|(b, s)| bound < *b || (bound == *b && strict && !s))
        {
            hi = Some((bound, strict));
        }
    }
    match (lo, hi) {
        (None, None) => Some(Q::zero()),
        (Some((l, _)), None) => Some(l + q(1)),
        (None, Some((h, _))) => Some(h - q(1)),
        (Some((l, ls)), Some((h, hs))) => {
            if l < h {
                Some((l + h) / q(2))
            } else if l == h && !ls && !hs {
                Some(l)
            } else {
                None
            }
        }
    }
}

pub fn is_feasible(dim: usize, constraints: &[Constraint]) -> bool {
    feasible_point(dim, constraints).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q_frac;

    fn c(a: &[i64], k: i64, rel: Rel) -> Constraint {
        Constraint::new(a.iter().map(|&x| q(x)).collect(), q(k), rel)
    }

    #[test]
    fn open_triangle_is_feasible() {
        // x > 0, y > 0, x + y < 1
        let cs = [
            c(&[1, 0], 0, Rel::Gt),
            c(&[0, 1], 0, Rel::Gt),
            c(&[-1, -1], 1, Rel::Gt),
        ];
        let p = feasible_point(2, &cs).unwrap();
        assert!(cs.iter().all(|k| k.holds_at(&p)));
    }

    #[test]
    fn strictness_matters() {
        // x >= 0 and -x >= 0 is the point 0; with x > 0 it is empty.
        assert!(is_feasible(1, &[c(&[1], 0, Rel::Ge), c(&[-1], 0, Rel::Ge)]));
        assert!(!is_feasible(
            1,
            &[c(&[1], 0, Rel::Gt), c(&[-1], 0, Rel::Ge)]
        ));
    }

    #[test]
    fn equalities_are_substituted() {
        // x = y, x + y = 1, x > 1/3
        let cs = [
            c(&[1, -1], 0, Rel::Eq),
            c(&[1, 1], -1, Rel::Eq),
            Constraint::new(vec![q(1), q(0)], -q_frac(1, 3), Rel::Gt),
        ];
        assert_eq!(
            feasible_point(2, &cs).unwrap(),
            vec![q_frac(1, 2), q_frac(1, 2)]
        );
        let bad = [c(&[1, -1], 0, Rel::Eq), c(&[1, -1], -1, Rel::Eq)];
        assert!(!is_feasible(2, &bad));
    }

    #[test]
    fn three_dimensional_cell() {
        // x, y, z > 0 and x + y + z < 1 and x - y > 0
        let cs = [
            c(&[1, 0, 0], 0, Rel::Gt),
            c(&[0, 1, 0], 0, Rel::Gt),
            c(&[0, 0, 1], 0, Rel::Gt),
            c(&[-1, -1, -1], 1, Rel::Gt),
            c(&[1, -1, 0], 0, Rel::Gt),
        ];
        let p = feasible_point(3, &cs).unwrap();
        assert!(cs.iter().all(|k| k.holds_at(&p)));
        let mut empty = cs.to_vec();
        empty.push(c(&[-1, 1, 0], 0, Rel::Ge));
        assert!(!is_feasible(3, &empty));
    }
}
