//! Periodic arrangements: finitely many hyperplanes together with all their
//! translates by an integer lattice.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::arrangement::{FiniteArrangement, RationalHyperplane};
use crate::error::{Error, Result};
use crate::rational::{ceil_q, dot, floor_q, gcd_q, q, rank, Q};

/// Where a window element came from: `orbit` indexes the representative,
/// `step` counts translates, so the element is
/// `<n, x> = offset + step * orbit_step(orbit)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Provenance {
    pub orbit: usize,
    pub step: i64,
}

#[derive(Clone, Debug)]
pub struct PeriodicArrangement {
    dim: usize,
    reps: Vec<RationalHyperplane>,
    /// Lattice generators, one integer vector per generator.
    lattice: Vec<Vec<i64>>,
    /// Positive generator of `{<n_o, λ> : λ ∈ Λ}` per orbit.
    steps: Vec<Q>,
}

impl PeriodicArrangement {
    pub fn new(
        dim: usize,
        reps: Vec<RationalHyperplane>,
        lattice: Vec<Vec<i64>>,
    ) -> Result<PeriodicArrangement> {
        for h in &reps {
            if h.normal.len() != dim || h.normal.iter().all(Zero::is_zero) {
                return Err(Error::Degenerate(format!("bad normal for {}", h.name)));
            }
        }
        crate::system::GroundSet::new(reps.iter().map(|h| h.name.clone()))?;
        if lattice.len() != dim || lattice.iter().any(|v| v.len() != dim) {
            return Err(Error::Degenerate(format!(
                "lattice needs {dim} generators of length {dim}"
            )));
        }
        let lq: Vec<Vec<Q>> = lattice
            .iter()
            .map(|v| v.iter().map(|&x| q(x)).collect())
            .collect();
        if rank(&lq) != dim {
            return Err(Error::Degenerate("lattice is not full rank".into()));
        }
        let steps: Vec<Q> = reps
            .iter()
            .map(|h| gcd_q(&lq.iter().map(|l| dot(&h.normal, l)).collect::<Vec<_>>()))
            .collect();
        let p = PeriodicArrangement {
            dim,
            reps,
            lattice,
            steps,
        };
        for i in 0..p.reps.len() {
            for j in i + 1..p.reps.len() {
                if p.orbits_coincide(i, j) {
                    return Err(Error::Degenerate(format!(
                        "translates of {} and {} coincide",
                        p.reps[i].name, p.reps[j].name
                    )));
                }
            }
        }
        Ok(p)
    }

    /// The toric arrangement of the characters given as columns of `chars`
    /// (`chars[i][j]` is coordinate `i` of character `j`), lifted to the
    /// periodic arrangement `{<χ, x> ∈ ℤ}` with lattice `ℤ^d`.
    ///
    /// A character with content `c` splits into `c` lattice orbits.
    pub fn from_characters(chars: &[Vec<i64>]) -> Result<PeriodicArrangement> {
        let dim = chars.len();
        let ncols = chars.first().map_or(0, |r| r.len());
        let mut reps = Vec::new();
        for j in 0..ncols {
            let col: Vec<i64> = chars.iter().map(|r| r[j]).collect();
            let content = col.iter().fold(0i64, |g, &x| g.gcd(&x));
            if content == 0 {
                return Err(Error::Degenerate(format!("character {j} is zero")));
            }
            for r in 0..content {
                let name = if content == 1 {
                    format!("c{j}")
                } else {
                    format!("c{j}.{r}")
                };
                reps.push(RationalHyperplane::new(
                    name,
                    col.iter().map(|&x| q(x)).collect(),
                    q(r),
                ));
            }
        }
        let lattice = (0..dim)
            .map(|i| (0..dim).map(|k| i64::from(i == k)).collect())
            .collect();
        PeriodicArrangement::new(dim, reps, lattice)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn reps(&self) -> &[RationalHyperplane] {
        &self.reps
    }

    pub fn lattice(&self) -> &[Vec<i64>] {
        &self.lattice
    }

    pub fn orbit_step(&self, orbit: usize) -> &Q {
        &self.steps[orbit]
    }

    /// Offset of translate `step` of orbit `orbit`.
    pub fn offset(&self, orbit: usize, step: i64) -> Q {
        &self.reps[orbit].offset + &self.steps[orbit] * q(step)
    }

    pub fn hyperplane(&self, p: Provenance) -> RationalHyperplane {
        RationalHyperplane::new(
            element_name(&self.reps[p.orbit].name, p.step),
            self.reps[p.orbit].normal.clone(),
            self.offset(p.orbit, p.step),
        )
    }

    /// Number of steps a translation by `v` moves orbit `orbit`.
    pub fn shift(&self, orbit: usize, v: &[i64]) -> Result<i64> {
        let vq: Vec<Q> = v.iter().map(|&x| q(x)).collect();
        let k = dot(&self.reps[orbit].normal, &vq) / &self.steps[orbit];
        if !k.is_integer() {
            return Err(Error::Precondition(format!(
                "translation {v:?} does not map orbit {} to itself",
                self.reps[orbit].name
            )));
        }
        k.to_integer()
            .to_i64()
            .ok_or_else(|| Error::TooLarge("translation shift".into()))
    }

    fn orbits_coincide(&self, i: usize, j: usize) -> bool {
        let (a, b) = (&self.reps[i], &self.reps[j]);
        if !a.is_parallel_to(b) {
            return false;
        }
        let k = a.normal.iter().position(|x| !x.is_zero()).unwrap();
        let c = &b.normal[k] / &a.normal[k];
        let diff = (&b.offset / &c - &a.offset) / &self.steps[i];
        diff.is_integer()
    }

    /// Orbits whose normals are parallel to that of `orbit` (including it).
    pub fn parallel_orbits(&self, orbit: usize) -> Vec<usize> {
        (0..self.reps.len())
            .filter(|&o| self.reps[o].is_parallel_to(&self.reps[orbit]))
            .collect()
    }

    /// Range of translate steps of `orbit` meeting the closed box.
    pub fn steps_in_box(&self, orbit: usize, window: &[(Q, Q)]) -> (i64, i64) {
        let h = &self.reps[orbit];
        let (mut lo, mut hi) = (Q::zero(), Q::zero());
        for (n, (a, b)) in h.normal.iter().zip(window) {
            let (x, y) = (n * a, n * b);
            if x <= y {
                lo += x;
                hi += y;
            } else {
                lo += y;
                hi += x;
            }
        }
        let g = &self.steps[orbit];
        let first = ceil_q(&((lo - &h.offset) / g));
        let last = floor_q(&((hi - &h.offset) / g));
        (to_i64(&first), to_i64(&last))
    }

    /// All translates meeting the closed box `window`, ordered by orbit and
    /// then by step.
    pub fn window_restrict(
        &self,
        window: &[(Q, Q)],
    ) -> Result<(FiniteArrangement, Vec<Provenance>)> {
        if window.len() != self.dim {
            return Err(Error::Parse(format!(
                "window has {} axes, arrangement has dimension {}",
                window.len(),
                self.dim
            )));
        }
        let mut hs = Vec::new();
        let mut prov = Vec::new();
        for o in 0..self.reps.len() {
            let (first, last) = self.steps_in_box(o, window);
            for step in first..=last {
                let p = Provenance { orbit: o, step };
                hs.push(self.hyperplane(p));
                prov.push(p);
            }
        }
        Ok((FiniteArrangement::new(self.dim, hs)?, prov))
    }

    /// Whether a translate of `orbit` passes through `x`.
    pub fn contains_point(&self, orbit: usize, x: &[Q]) -> Option<i64> {
        let h = &self.reps[orbit];
        let k = (dot(&h.normal, x) - &h.offset) / &self.steps[orbit];
        k.is_integer().then(|| to_i64(&k.to_integer()))
    }
}

pub fn element_name(rep: &str, step: i64) -> String {
    format!("{rep}@{step}")
}

fn to_i64(x: &BigInt) -> i64 {
    x.to_i64().expect("window step fits in i64")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q_frac;

    fn rep(name: &str, n: &[i64], b: Q) -> RationalHyperplane {
        RationalHyperplane::new(name, n.iter().map(|&x| q(x)).collect(), b)
    }

    fn triangular() -> PeriodicArrangement {
        PeriodicArrangement::new(
            2,
            vec![
                rep("x", &[1, 0], q(0)),
                rep("y", &[0, 1], q(0)),
                rep("s", &[1, 1], q(0)),
            ],
            vec![vec![1, 0], vec![0, 1]],
        )
        .unwrap()
    }

    #[test]
    fn triangular_window_has_seven_lines() {
        let p = triangular();
        let w = vec![(q_frac(-1, 4), q_frac(5, 4)), (q_frac(-1, 4), q_frac(5, 4))];
        let (a, prov) = p.window_restrict(&w).unwrap();
        assert_eq!(a.len(), 7);
        assert_eq!(prov.iter().filter(|p| p.orbit == 2).count(), 3);
        assert_eq!(a.hyperplanes()[0].name, "x@0");
    }

    #[test]
    fn translates_of_distinct_reps_must_not_coincide() {
        let r = PeriodicArrangement::new(
            1,
            vec![rep("a", &[1], q(0)), rep("b", &[2], q(2))],
            vec![vec![1]],
        );
        assert!(r.is_err());
        let ok = PeriodicArrangement::new(
            1,
            vec![rep("a", &[1], q(0)), rep("b", &[1], q_frac(1, 2))],
            vec![vec![1]],
        );
        assert!(ok.is_ok());
    }

    #[test]
    fn characters_split_by_content() {
        let p = PeriodicArrangement::from_characters(&[vec![2]]).unwrap();
        assert_eq!(p.reps().len(), 2);
        assert_eq!(p.orbit_step(0), &q(2));
        let w = vec![(q(0), q(1))];
        let (a, _) = p.window_restrict(&w).unwrap();
        // 2x ∈ {0, 1, 2}
        assert_eq!(a.len(), 3);
    }

    #[test]
    fn shift_counts_steps() {
        let p = triangular();
        assert_eq!(p.shift(2, &[1, 0]).unwrap(), 1);
        assert_eq!(p.shift(2, &[1, 1]).unwrap(), 2);
        assert_eq!(p.shift(0, &[0, 1]).unwrap(), 0);
    }
}
