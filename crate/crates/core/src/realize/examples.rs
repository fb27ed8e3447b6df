//! Small named arrangements used throughout the tests and the CLI demos.

use std::collections::BTreeMap;

use super::arrangement::{FiniteArrangement, RationalHyperplane};
use super::periodic::PeriodicArrangement;
use crate::rational::{q, q_frac, Q};
use crate::system::{Reorientation, SignSystem};

fn hp(name: &str, normal: &[i64], offset: Q) -> RationalHyperplane {
    RationalHyperplane::new(name, normal.iter().map(|&x| q(x)).collect(), offset)
}

fn unit_lattice(dim: usize) -> Vec<Vec<i64>> {
    (0..dim)
        .map(|i| (0..dim).map(|k| i64::from(i == k)).collect())
        .collect()
}

/// Four lines in the plane: `y = x`, `y = -x`, `y = 0` and `y = -1`, named
/// H1..H4. The first three meet at the origin; H3 and H4 are parallel.
pub fn four_lines() -> FiniteArrangement {
    FiniteArrangement::new(
        2,
        vec![
            hp("H1", &[1, -1], q(0)),
            hp("H2", &[1, 1], q(0)),
            hp("H3", &[0, 1], q(0)),
            hp("H4", &[0, 1], q(-1)),
        ],
    )
    .expect("valid arrangement")
}

/// Reorientation of [`four_lines`] that matches the customary drawing,
/// where the chambers read `(+,+,-,+)`, `(-,-,+,-)` and so on.
pub fn four_lines_reorientation() -> Reorientation {
    let g = four_lines().ground();
    let m: BTreeMap<String, i8> = [("H1", -1), ("H2", 1), ("H3", -1), ("H4", 1)]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect();
    Reorientation::from_map(&g, &m).expect("total")
}

/// The points 0 and 1 on the real line, oriented by `sign(x - p)`.
pub fn two_points() -> FiniteArrangement {
    FiniteArrangement::new(1, vec![hp("a", &[1], q(0)), hp("b", &[1], q(1))]).expect("valid")
}

/// Five cells of a line cut at two points, as a bare sign system.
pub fn two_point_line() -> SignSystem {
    SignSystem::from_strings(&["a", "b"], &["++", "0+", "-+", "-0", "--"]).expect("valid")
}

/// `{±,0}^n`: the covectors of `n` coordinate hyperplanes through the origin.
pub fn full_system(n: usize) -> SignSystem {
    let names: Vec<String> = (1..=n).map(|i| format!("e{i}")).collect();
    let mut v = vec![String::new()];
    for _ in 0..n {
        v = v
            .into_iter()
            .flat_map(|s| ["-", "0", "+"].map(|c| format!("{s}{c}")))
            .collect();
    }
    SignSystem::from_strings(&names, &v).expect("valid")
}

/// `x ∈ ℤ` on the line.
pub fn integer_points() -> PeriodicArrangement {
    PeriodicArrangement::new(1, vec![hp("a", &[1], q(0))], unit_lattice(1)).expect("valid")
}

/// `x ∈ ℤ` together with `x ∈ 1/2 + ℤ`.
pub fn half_points() -> PeriodicArrangement {
    PeriodicArrangement::new(
        1,
        vec![hp("a", &[1], q(0)), hp("b", &[1], q_frac(1, 2))],
        unit_lattice(1),
    )
    .expect("valid")
}

/// The integer grid lines `x ∈ ℤ`, `y ∈ ℤ`.
pub fn coordinate_grid() -> PeriodicArrangement {
    PeriodicArrangement::new(
        2,
        vec![hp("x", &[1, 0], q(0)), hp("y", &[0, 1], q(0))],
        unit_lattice(2),
    )
    .expect("valid")
}

/// `x ∈ ℤ`, `y ∈ ℤ`, `x + y ∈ ℤ`: the grid cut into triangles.
pub fn triangular() -> PeriodicArrangement {
    PeriodicArrangement::new(
        2,
        vec![
            hp("x", &[1, 0], q(0)),
            hp("y", &[0, 1], q(0)),
            hp("s", &[1, 1], q(0)),
        ],
        unit_lattice(2),
    )
    .expect("valid")
}

/// `x ∈ ℤ`, `y ∈ ℤ`, `2x + y ∈ ℤ`.
pub fn tilted() -> PeriodicArrangement {
    PeriodicArrangement::new(
        2,
        vec![
            hp("x", &[1, 0], q(0)),
            hp("y", &[0, 1], q(0)),
            hp("t", &[2, 1], q(0)),
        ],
        unit_lattice(2),
    )
    .expect("valid")
}

/// Looks up a named example; used by the CLI.
pub fn periodic_by_name(name: &str) -> Option<PeriodicArrangement> {
    Some(match name {
        "integer-points" => integer_points(),
        "half-points" => half_points(),
        "coordinate-grid" => coordinate_grid(),
        "triangular" => triangular(),
        "tilted" => tilted(),
        _ => return None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::realize::DEFAULT_SEED;

    #[test]
    fn four_lines_census() {
        let l = four_lines().covectors(DEFAULT_SEED).unwrap();
        assert_eq!(l.len(), 23);
        let by_zeros = |k: usize| l.iter().filter(|x| x.zero_set().count() == k).count();
        assert_eq!(by_zeros(0), 9);
    }

    #[test]
    fn two_points_have_five_cells() {
        let l = two_points().covectors(DEFAULT_SEED).unwrap();
        let got: Vec<String> = l.iter().map(|x| x.to_string()).collect();
        assert_eq!(got, ["--", "0-", "+-", "+0", "++"]);
    }

    #[test]
    fn full_system_sizes() {
        assert_eq!(full_system(2).len(), 9);
        assert_eq!(full_system(0).len(), 1);
    }
}
