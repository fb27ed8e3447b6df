//! Integer linear algebra: column echelon forms with unimodular transforms,
//! integer solutions of linear systems, sublattice indices and canonical
//! coset representatives.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type ZMatrix = Vec<Vec<BigInt>>;

pub fn zvec(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

/// `a · u = h` with `u` unimodular and `h` in lower column echelon form:
/// pivot `k` sits at `(pivots[k], k)`, and column `k` vanishes above row
/// `pivots[k]`. Pivots are positive; columns past the rank are zero.
#[derive(Clone, Debug)]
pub struct ColumnEchelon {
    pub h: ZMatrix,
    pub u: ZMatrix,
    pub u_inv: ZMatrix,
    pub pivots: Vec<usize>,
}

impl ColumnEchelon {
    pub fn new(a: &[Vec<BigInt>], ncols: usize) -> ColumnEchelon {
        let rows = a.len();
        let mut h: ZMatrix = a.to_vec();
        let mut u = identity(ncols);
        let mut u_inv = identity(ncols);
        let mut pivots = Vec::new();
        let mut c = 0;
        for r in 0..rows {
            if c == ncols {
                break;
            }
            // Fold every column from c on into column c by gcd steps.
            for j in c + 1..ncols {
                if h[r][j].is_zero() {
                    continue;
                }
                let (a0, b0) = (h[r][c].clone(), h[r][j].clone());
                let e = a0.extended_gcd(&b0);
                // [p q; s t] with det 1: new c = p·c + s·j, new j = q·c + t·j.
                let (p, s) = (e.x, e.y);
                let (q, t) = (-(&b0 / &e.gcd), &a0 / &e.gcd);
                combine(&mut h, &mut u, &mut u_inv, c, j, [&p, &q, &s, &t]);
            }
            if h[r][c].is_zero() {
                continue;
            }
            if h[r][c].is_negative() {
                negate_column(&mut h, &mut u, &mut u_inv, c);
            }
            pivots.push(r);
            c += 1;
        }
        ColumnEchelon {
            h,
            u,
            u_inv,
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

fn identity(n: usize) -> ZMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| BigInt::from(u8::from(i == j))).collect())
        .collect()
}

fn combine(
    h: &mut ZMatrix,
    u: &mut ZMatrix,
    u_inv: &mut ZMatrix,
    i: usize,
    j: usize,
    m: [&BigInt; 4],
) {
    let [p, q, s, t] = m;
    for row in h.iter_mut().chain(u.iter_mut()) {
        let (x, y) = (row[i].clone(), row[j].clone());
        row[i] = p * &x + s * &y;
        row[j] = q * &x + t * &y;
    }
    // Inverse of [p q; s t] (det 1) is [t -q; -s p], acting on rows.
    let (ri, rj) = (u_inv[i].clone(), u_inv[j].clone());
    for k in 0..ri.len() {
        u_inv[i][k] = t * &ri[k] - q * &rj[k];
        u_inv[j][k] = -(s * &ri[k]) + p * &rj[k];
    }
}

fn negate_column(h: &mut ZMatrix, u: &mut ZMatrix, u_inv: &mut ZMatrix, c: usize) {
    for row in h.iter_mut().chain(u.iter_mut()) {
        row[c] = -row[c].clone();
    }
    for x in u_inv[c].iter_mut() {
        *x = -x.clone();
    }
}

fn mat_vec(a: &[Vec<BigInt>], x: &[BigInt]) -> Vec<BigInt> {
    a.iter()
        .map(|row| row.iter().zip(x).map(|(p, q)| p * q).sum())
        .collect()
}

/// Integer solutions of `a·x = b` as `(particular, kernel basis)`, or `None`
/// when there are none.
pub fn solve_integer(
    a: &[Vec<BigInt>],
    b: &[BigInt],
    ncols: usize,
) -> Option<(Vec<BigInt>, ZMatrix)> {
    let e = ColumnEchelon::new(a, ncols);
    let mut y = vec![BigInt::zero(); ncols];
    let mut k = 0;
    for (r, row) in e.h.iter().enumerate() {
        let acc: BigInt = (0..k).map(|c| &row[c] * &y[c]).sum();
        let rest = &b[r] - acc;
        if k < e.rank() && e.pivots[k] == r {
            let (qt, rem) = rest.div_rem(&row[k]);
            if !rem.is_zero() {
                return None;
            }
            y[k] = qt;
            k += 1;
        } else if !rest.is_zero() {
            return None;
        }
    }
    let x = mat_vec(&e.u, &y);
    let kernel = (e.rank()..ncols)
        .map(|c| e.u.iter().map(|row| row[c].clone()).collect())
        .collect();
    Some((x, kernel))
}

/// The lattice spanned by some integer vectors, kept as a column echelon
/// basis so that cosets have canonical representatives.
#[derive(Clone, Debug)]
pub struct Lattice {
    dim: usize,
    /// Basis vectors; vector `k` has its pivot at coordinate `pivots[k]`.
    basis: ZMatrix,
    pivots: Vec<usize>,
}

impl Lattice {
    pub fn new(gens: &[Vec<BigInt>], dim: usize) -> Lattice {
        // Generators become the columns of a dim × |gens| matrix.
        let a: ZMatrix = (0..dim)
            .map(|i| gens.iter().map(|g| g[i].clone()).collect())
            .collect();
        let e = ColumnEchelon::new(&a, gens.len());
        let basis = (0..e.rank())
            .map(|c| (0..dim).map(|i| e.h[i][c].clone()).collect())
            .collect();
        Lattice {
            dim,
            basis,
            pivots: e.pivots,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<BigInt>] {
        &self.basis
    }

    /// Canonical representative of `v + L`: each pivot coordinate is brought
    /// into `[0, pivot)`.
    pub fn reduce(&self, v: &[BigInt]) -> Vec<BigInt> {
        let mut v = v.to_vec();
        for (b, &r) in self.basis.iter().zip(&self.pivots) {
            let t = v[r].div_floor(&b[r]);
            if !t.is_zero() {
                for (x, y) in v.iter_mut().zip(b) {
                    *x -= &t * y;
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.reduce(v).iter().all(Zero::is_zero)
    }

    /// Product of the pivots; for a full-rank lattice this is `[ℤ^dim : L]`.
    pub fn pivot_product(&self) -> BigInt {
        self.basis
            .iter()
            .zip(&self.pivots)
            .map(|(b, &r)| b[r].clone())
            .fold(BigInt::one(), |a, b| a * b)
    }
}

/// `[outer : inner]` where `outer` is spanned by the independent columns of
/// `outer_basis` (a `dim × r` list of `r` vectors) and `inner` by `gens`, all
/// of which must lie in `outer`. `None` if `inner` has smaller rank or some
/// generator lies outside `outer`.
pub fn sublattice_index(
    outer_basis: &[Vec<BigInt>],
    gens: &[Vec<BigInt>],
    dim: usize,
) -> Option<BigInt> {
    let r = outer_basis.len();
    let a: ZMatrix = (0..dim)
        .map(|i| outer_basis.iter().map(|b| b[i].clone()).collect())
        .collect();
    let e = ColumnEchelon::new(&a, r);
    if e.rank() != r {
        return None;
    }
    // Coordinates of each generator in the outer basis.
    let coords: Vec<Vec<BigInt>> = gens
        .iter()
        .map(|g| {
            let (x, _) = solve_integer(&a, g, r)?;
            Some(x)
        })
        .collect::<Option<_>>()?;
    let l = Lattice::new(&coords, r);
    (l.rank() == r).then(|| l.pivot_product().abs())
}

/// Gcd of all `k × k` minors of an integer matrix with `k` rows, via the
/// column echelon form. Zero if the rows are dependent.
pub fn maximal_minor_gcd(rows: &[Vec<BigInt>], ncols: usize) -> BigInt {
    let e = ColumnEchelon::new(rows, ncols);
    if e.rank() < rows.len() {
        return BigInt::zero();
    }
    (0..e.rank())
        .map(|c| e.h[e.pivots[c]][c].clone())
        .fold(BigInt::one(), |a, b| a * b)
}

/// Index of the lattice spanned by `vectors` in the integer points of its
/// rational span: the gcd of its maximal minors.
pub fn saturation_index(vectors: &[Vec<BigInt>], dim: usize) -> BigInt {
    let l = Lattice::new(vectors, dim);
    if l.rank() == 0 {
        return BigInt::one();
    }
    maximal_minor_gcd(l.basis(), dim)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(rows: &[&[i64]]) -> ZMatrix {
        rows.iter().map(|r| zvec(r)).collect()
    }

    fn mul(a: &ZMatrix, b: &ZMatrix) -> ZMatrix {
        a.iter()
            .map(|row| {
                (0..b[0].len())
                    .map(|j| row.iter().zip(b).map(|(x, r)| x * &r[j]).sum())
                    .collect()
            })
            .collect()
    }

    #[test]
    fn echelon_identities() {
        let a = z(&[&[2, 4, 6], &[1, 3, 7]]);
        let e = ColumnEchelon::new(&a, 3);
        assert_eq!(mul(&a, &e.u), e.h);
        assert_eq!(mul(&e.u, &e.u_inv), identity(3));
        assert_eq!(e.pivots, vec![0, 1]);
        assert_eq!(e.h[0][0], BigInt::from(2));
        assert!(e.h[0][1].is_zero() && e.h[0][2].is_zero() && e.h[1][2].is_zero());
    }

    #[test]
    fn integer_solutions() {
        // 2x = 3 has rational but no integer solutions.
        assert!(solve_integer(&z(&[&[2]]), &zvec(&[3]), 1).is_none());
        let (x, k) = solve_integer(&z(&[&[2, 1]]), &zvec(&[3]), 2).unwrap();
        assert_eq!(&x[0] * 2 + &x[1], BigInt::from(3));
        assert_eq!(k.len(), 1);
        assert_eq!(&k[0][0] * 2 + &k[0][1], BigInt::zero());
        // Inconsistent rows.
        assert!(solve_integer(&z(&[&[1, 1], &[1, 1]]), &zvec(&[0, 1]), 2).is_none());
        // Empty system: everything solves it.
        let (_, k) = solve_integer(&[], &[], 3).unwrap();
        assert_eq!(k.len(), 3);
    }

    #[test]
    fn cosets_and_indices() {
        let l = Lattice::new(&z(&[&[2, 0], &[1, 1]]), 2);
        assert_eq!(l.pivot_product(), BigInt::from(2));
        assert!(l.contains(&zvec(&[3, 1])));
        assert!(!l.contains(&zvec(&[1, 0])));
        assert_eq!(l.reduce(&zvec(&[5, 3])), l.reduce(&zvec(&[1, 1])));
        let outer = z(&[&[1, 0], &[0, 1]]);
        assert_eq!(
            sublattice_index(&outer, &z(&[&[0, 2], &[1, 1]]), 2),
            Some(BigInt::from(2))
        );
        assert_eq!(sublattice_index(&outer, &z(&[&[1, 1]]), 2), None);
    }

    #[test]
    fn minors() {
        assert_eq!(
            maximal_minor_gcd(&z(&[&[1, 0, 1], &[0, 1, 1]]), 3),
            BigInt::one()
        );
        assert_eq!(maximal_minor_gcd(&z(&[&[2, 4]]), 2), BigInt::from(2));
        assert_eq!(
            maximal_minor_gcd(&z(&[&[1, 2], &[2, 4]]), 2),
            BigInt::zero()
        );
        assert_eq!(
            maximal_minor_gcd(&z(&[&[0, 2], &[1, 1]]), 2),
            BigInt::from(2)
        );
        // (2,4) and (1,2) span 1·(1,2)ℤ; (2,0) and (4,0) span 2·(1,0)ℤ.
        assert_eq!(saturation_index(&z(&[&[2, 4], &[1, 2]]), 2), BigInt::one());
        assert_eq!(
            saturation_index(&z(&[&[2, 0], &[4, 0]]), 2),
            BigInt::from(2)
        );
        assert_eq!(saturation_index(&[], 2), BigInt::one());
    }
}
