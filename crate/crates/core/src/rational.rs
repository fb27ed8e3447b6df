//! Exact rationals and small dense linear algebra over them.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"3"`, `"-1/2"` or a terminating decimal such as `"0.25"`.
pub fn parse_q(s: &str) -> Result<Q> {
    let t = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Q::new(n, d));
    }
    if let Some((ip, fp)) = t.split_once('.') {
        if fp.is_empty() || !fp.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let neg = ip.starts_with('-');
        let whole: BigInt = if ip.is_empty() || ip == "-" {
            BigInt::zero()
        } else {
            ip.parse().map_err(|_| bad())?
        };
        let scale = num_traits::pow(BigInt::from(10), fp.len());
        let frac: BigInt = fp.parse().map_err(|_| bad())?;
        let mag = whole.abs() * &scale + frac;
        let num = if neg { -mag } else { mag };
        return Ok(Q::new(num, scale));
    }
    let n: BigInt = t.parse().map_err(|_| bad())?;
    Ok(Q::from_integer(n))
}

/// `"p/q"`, or `"p"` for integers.
pub fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn floor_q(x: &Q) -> BigInt {
    x.floor().to_integer()
}

pub fn ceil_q(x: &Q) -> BigInt {
    x.ceil().to_integer()
}

/// Positive generator of the additive group spanned by `xs` (zero if all are zero).
pub fn gcd_q(xs: &[Q]) -> Q {
    let den = xs.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let g = xs
        .iter()
        .map(|x| (x * Q::from_integer(den.clone())).to_integer())
        .fold(BigInt::zero(), |acc, n| acc.gcd(&n));
    Q::new(g, den)
}

pub fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Row-reduced echelon form; returns the pivot columns.
pub fn rref(m: &mut [Vec<Q>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..cols {
                    let t = &m[r][j] * &f;
                    m[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(rows: &[Vec<Q>]) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m).len()
}

/// Basis of `{x : a x = 0}` for a matrix with `ncols` columns.
pub fn nullspace(a: &[Vec<Q>], ncols: usize) -> Vec<Vec<Q>> {
    let mut m = a.to_vec();
    let pivots = rref(&mut m);
    (0..ncols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut x = vec![Q::zero(); ncols];
            x[free] = Q::one();
            for (row, &c) in m.iter().zip(&pivots) {
                x[c] = -row[free].clone();
            }
            x
        })
        .collect()
}

/// A reduced basis of a row space, for repeated membership tests.
#[derive(Clone, Debug)]
pub struct RowSpace {
    basis: Vec<Vec<Q>>,
    pivots: Vec<usize>,
}

impl RowSpace {
    pub fn new(rows: &[Vec<Q>]) -> RowSpace {
        let mut m = rows.to_vec();
        let pivots = rref(&mut m);
        m.truncate(pivots.len());
        RowSpace { basis: m, pivots }
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn contains(&self, v: &[Q]) -> bool {
        let mut v = v.to_vec();
        for (row, &c) in self.basis.iter().zip(&self.pivots) {
            if !v[c].is_zero() {
                let f = v[c].clone();
                for (x, y) in v.iter_mut().zip(row) {
                    *x -= y * &f;
                }
            }
        }
        v.iter().all(Zero::is_zero)
    }
}

/// Some solution of `a x = b`, or `None` if inconsistent.
pub fn solve(a: &[Vec<Q>], b: &[Q]) -> Option<Vec<Q>> {
    let n = a.first().map_or(0, |r| r.len());
    let mut m: Vec<Vec<Q>> = a
        .iter()
        .zip(b)
        .map(|(r, x)| {
            let mut r = r.clone();
            r.push(x.clone());
            r
        })
        .collect();
    let pivots = rref(&mut m);
    if pivots.contains(&n) {
        return None;
    }
    let mut x = vec![Q::zero(); n];
    for (row, &c) in m.iter().zip(&pivots) {
        x[c] = row[n].clone();
    }
    Some(x)
}

/// Inverse of a square matrix, if invertible.
pub fn inverse(a: &[Vec<Q>]) -> Option<Vec<Vec<Q>>> {
    let n = a.len();
    let mut m: Vec<Vec<Q>> = a
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut r = r.clone();
            r.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            r
        })
        .collect();
    let pivots = rref(&mut m);
    if pivots.len() < n || pivots[n - 1] >= n {
        return None;
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn mat_vec(a: &[Vec<Q>], x: &[Q]) -> Vec<Q> {
    a.iter().map(|r| dot(r, x)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_q("-1/2").unwrap(), q_frac(-1, 2));
        assert_eq!(parse_q("0.25").unwrap(), q_frac(1, 4));
        assert_eq!(parse_q("-1.5").unwrap(), q_frac(-3, 2));
        assert_eq!(parse_q("7").unwrap(), q(7));
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("x").is_err());
        assert_eq!(fmt_q(&q_frac(6, 4)), "3/2");
        assert_eq!(fmt_q(&q(-3)), "-3");
    }

    #[test]
    fn rational_gcd() {
        assert_eq!(gcd_q(&[q_frac(1, 2), q(1)]), q_frac(1, 2));
        assert_eq!(gcd_q(&[q(4), q(6)]), q(2));
        assert_eq!(gcd_q(&[q(-3), q(0)]), q(3));
    }

    #[test]
    fn solve_rank_inverse() {
        let a = vec![vec![q(1), q(1)], vec![q(1), q(-1)]];
        assert_eq!(solve(&a, &[q(2), q(0)]).unwrap(), vec![q(1), q(1)]);
        assert_eq!(rank(&a), 2);
        let inv = inverse(&a).unwrap();
        assert_eq!(mat_vec(&inv, &[q(2), q(0)]), vec![q(1), q(1)]);
        let sing = vec![vec![q(1), q(2)], vec![q(2), q(4)]];
        assert!(inverse(&sing).is_none());
        assert!(solve(&sing, &[q(1), q(3)]).is_none());
        let rs = RowSpace::new(&sing);
        assert_eq!(rs.dim(), 1);
        assert!(rs.contains(&[q(-1), q(-2)]));
        assert!(!rs.contains(&[q(1), q(0)]));
    }
}
