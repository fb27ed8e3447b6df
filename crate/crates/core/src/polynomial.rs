//! Integer polynomials in up to two variables.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// `Σ c_{ij} x^i y^j` with integer coefficients; zero terms are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Poly2 {
    terms: BTreeMap<(u32, u32), i64>,
}

impl Poly2 {
    pub fn zero() -> Poly2 {
        Poly2::default()
    }

    pub fn constant(c: i64) -> Poly2 {
        Poly2::monomial(c, 0, 0)
    }

    pub fn monomial(c: i64, i: u32, j: u32) -> Poly2 {
        let mut p = Poly2::zero();
        p.add_term(c, i, j);
        p
    }

    pub fn x() -> Poly2 {
        Poly2::monomial(1, 1, 0)
    }

    pub fn y() -> Poly2 {
        Poly2::monomial(1, 0, 1)
    }

    pub fn add_term(&mut self, c: i64, i: u32, j: u32) {
        let e = self.terms.entry((i, j)).or_insert(0);
        *e += c;
        if *e == 0 {
            self.terms.remove(&(i, j));
        }
    }

    pub fn coeff(&self, i: u32, j: u32) -> i64 {
        self.terms.get(&(i, j)).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), i64)> + '_ {
        self.terms.iter().map(|(&k, &c)| (k, c))
    }

    pub fn pow(&self, n: u32) -> Poly2 {
        (0..n).fold(Poly2::constant(1), |acc, _| &acc * self)
    }

    pub fn eval(&self, x: i64, y: i64) -> i64 {
        self.terms
            .iter()
            .map(|(&(i, j), &c)| c * x.pow(i) * y.pow(j))
            .sum()
    }

    /// Substitutes polynomials for both variables.
    pub fn compose(&self, x: &Poly2, y: &Poly2) -> Poly2 {
        let mut out = Poly2::zero();
        for (&(i, j), &c) in &self.terms {
            out = &out + &(&(&x.pow(i) * &y.pow(j)) * &Poly2::constant(c));
        }
        out
    }

    /// Renders with the given variable names, highest total degree first.
    pub fn display_with(&self, xv: &str, yv: &str) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut keys: Vec<(u32, u32)> = self.terms.keys().copied().collect();
        keys.sort_by(|a, b| (b.0 + b.1, b.0).cmp(&(a.0 + a.1, a.0)));
        let mut s = String::new();
        for (k, &(i, j)) in keys.iter().enumerate() {
            let c = self.terms[&(i, j)];
            let mag = c.unsigned_abs();
            if k == 0 {
                if c < 0 {
                    s.push('-');
                }
            } else {
                s.push_str(if c < 0 { " - " } else { " + " });
            }
            let mut mono = String::new();
            for (v, e) in [(xv, i), (yv, j)] {
                match e {
                    0 => {}
                    1 => mono.push_str(v),
                    _ => mono.push_str(&format!("{v}^{e}")),
                }
            }
            if mono.is_empty() {
                s.push_str(&mag.to_string());
            } else {
                if mag != 1 {
                    s.push_str(&mag.to_string());
                }
                s.push_str(&mono);
            }
        }
        s
    }
}

impl fmt::Display for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with("x", "y"))
    }
}

impl Add for &Poly2 {
    type Output = Poly2;
    fn add(self, rhs: &Poly2) -> Poly2 {
        let mut out = self.clone();
        for (&(i, j), &c) in &rhs.terms {
            out.add_term(c, i, j);
        }
        out
    }
}

impl Neg for &Poly2 {
    type Output = Poly2;
    fn neg(self) -> Poly2 {
        Poly2 {
            terms: self.terms.iter().map(|(&k, &c)| (k, -c)).collect(),
        }
    }
}

impl Sub for &Poly2 {
    type Output = Poly2;
    fn sub(self, rhs: &Poly2) -> Poly2 {
        self + &(-rhs)
    }
}

impl Mul for &Poly2 {
    type Output = Poly2;
    fn mul(self, rhs: &Poly2) -> Poly2 {
        let mut out = Poly2::zero();
        for (&(i, j), &c) in &self.terms {
            for (&(k, l), &d) in &rhs.terms {
                out.add_term(c * d, i + k, j + l);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_display() {
        let x = Poly2::x();
        let y = Poly2::y();
        let one = Poly2::constant(1);
        let p = &(&x.pow(2) + &x) + &y;
        assert_eq!(p.to_string(), "x^2 + x + y");
        let q = &(&x - &one).pow(2);
        assert_eq!(q.to_string(), "x^2 - 2x + 1");
        assert_eq!(p.eval(1, 0), 2);
        assert_eq!(Poly2::zero().to_string(), "0");
        assert_eq!((-&p).to_string(), "-x^2 - x - y");
    }

    #[test]
    fn composition() {
        // T(x,y) = x^2 + x + y at (1 - t, 0) = t^2 - 3t + 2
        let t = Poly2::x();
        let p = &(&Poly2::x().pow(2) + &Poly2::x()) + &Poly2::y();
        let c = p.compose(&(&Poly2::constant(1) - &t), &Poly2::zero());
        assert_eq!(c.display_with("t", "s"), "t^2 - 3t + 2");
    }
}
