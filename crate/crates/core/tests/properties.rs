mod common;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

use omkit_core::action::{arithmetic_tutte_from_matrix, gsemimatroid_table, TranslationAction};
use omkit_core::axioms::{is_aom, is_com};
use omkit_core::lattice::{maximal_minor_gcd, solve_integer, zvec, Lattice};
use omkit_core::rational::{fmt_q, parse_q, q_frac};
use omkit_core::realize::{PeriodicArrangement, DEFAULT_SEED};
use omkit_core::{ElemSet, Reorientation, Sign, SignSystem, SignVector};

fn sign() -> impl Strategy<Value = Sign> {
    prop_oneof![Just(Sign::Minus), Just(Sign::Zero), Just(Sign::Plus)]
}

fn vectors(
    n: usize,
    k: impl Into<prop::collection::SizeRange>,
) -> impl Strategy<Value = Vec<SignVector>> {
    prop::collection::vec(prop::collection::vec(sign(), n), k)
        .prop_map(|vs| vs.iter().map(|s| SignVector::from_signs(s)).collect())
}

fn small_matrix(rows: usize, cols: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-3i64..=3, cols), rows)
}

fn z(m: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    m.iter().map(|r| zvec(r)).collect()
}

fn apply(a: &[Vec<i64>], x: &[i64]) -> Vec<i64> {
    a.iter()
        .map(|r| r.iter().zip(x).map(|(p, q)| p * q).sum())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 96, ..ProptestConfig::default() })]

    #[test]
    fn composition_laws(v in vectors(6, 3)) {
        let (x, y, w) = (&v[0], &v[1], &v[2]);
        prop_assert_eq!(x.compose(&y.compose(w)), x.compose(y).compose(w));
        prop_assert_eq!(x.compose(x), x.clone());
        prop_assert_eq!(x.compose(&-x), x.clone());
        prop_assert!(x.leq(&x.compose(y)));
        prop_assert_eq!(x.separator(y), y.separator(x));
        prop_assert_eq!(x.separator(y).is_empty(), x.compose(y) == y.compose(x));
        prop_assert_eq!(x.support().union(&x.zero_set()), ElemSet::full(6));
        prop_assert_eq!(SignVector::parse(&x.to_string()).unwrap(), x.clone());
    }

    #[test]
    fn conformal_order_is_componentwise(v in vectors(5, 2)) {
        let (x, y) = (&v[0], &v[1]);
        let expect = (0..5).all(|e| x.get(e) == Sign::Zero || x.get(e) == y.get(e));
        prop_assert_eq!(x.leq(y), expect);
    }

    #[test]
    fn system_json_round_trip(v in vectors(4, 0..12usize)) {
        let names: Vec<String> = ["p", "q", "r", "s"].map(String::from).to_vec();
        let strs: Vec<String> = v.iter().map(ToString::to_string).collect();
        let s = SignSystem::from_strings(&names, &strs).unwrap();
        let text = s.to_json();
        let again = SignSystem::from_json(&text).unwrap();
        prop_assert_eq!(again.to_json(), text);
    }

    #[test]
    fn rationals_round_trip(n in -1000i64..1000, d in 1i64..50) {
        let x = q_frac(n, d);
        prop_assert_eq!(parse_q(&fmt_q(&x)).unwrap(), x);
    }

    #[test]
    fn lattice_cosets(gens in small_matrix(2, 3), v in prop::collection::vec(-9i64..=9, 3), c in prop::collection::vec(-3i64..=3, 2)) {
        let l = Lattice::new(&z(&gens), 3);
        let shifted: Vec<i64> = (0..3).map(|i| v[i] + c[0] * gens[0][i] + c[1] * gens[1][i]).collect();
        prop_assert_eq!(l.reduce(&zvec(&v)), l.reduce(&zvec(&shifted)));
        let combo: Vec<i64> = (0..3).map(|i| c[0] * gens[0][i] + c[1] * gens[1][i]).collect();
        prop_assert!(l.contains(&zvec(&combo)));
        let r = l.reduce(&zvec(&v));
        let diff: Vec<BigInt> = r.iter().zip(zvec(&v)).map(|(a, b)| a - b).collect();
        prop_assert!(l.contains(&diff));
    }

    #[test]
    fn integer_solutions_match_search(a in small_matrix(2, 3), b in prop::collection::vec(-4i64..=4, 2)) {
        let found = solve_integer(&z(&a), &zvec(&b), 3);
        let r = -4i64..=4;
        let brute = r.clone().flat_map(|x| r.clone().flat_map(move |y| (-4i64..=4).map(move |w| [x, y, w])))
            .find(|x| apply(&a, x) == b);
        if brute.is_some() {
            prop_assert!(found.is_some());
        }
        if let Some((x, kernel)) = found {
            let xi: Vec<i64> = x.iter().map(|v| i64::try_from(v).unwrap()).collect();
            prop_assert_eq!(apply(&a, &xi), b);
            for k in kernel {
                let ki: Vec<i64> = k.iter().map(|v| i64::try_from(v).unwrap()).collect();
                prop_assert_eq!(apply(&a, &ki), vec![0, 0]);
            }
        }
    }

    #[test]
    fn minor_gcd_matches_determinants(a in small_matrix(2, 4)) {
        let mut g = BigInt::zero();
        for i in 0..4 {
            for j in i + 1..4 {
                g = g.gcd(&BigInt::from(a[0][i] * a[1][j] - a[0][j] * a[1][i]));
            }
        }
        prop_assert_eq!(maximal_minor_gcd(&z(&a), 4).abs(), g);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    /// The census-free path (orbit table) against minors of the character
    /// matrix, on random characters of the torus.
    #[test]
    fn geometric_tutte_matches_arithmetic(m in small_matrix(2, 3)) {
        let p = PeriodicArrangement::from_characters(&m);
        let arith = arithmetic_tutte_from_matrix(&m);
        prop_assume!(p.is_ok() && arith.is_ok());
        let geo = gsemimatroid_table(&TranslationAction::full(p.unwrap())).unwrap().tutte_polynomial();
        let arith = arith.unwrap();
        prop_assert_eq!(geo, arith);
    }

    #[test]
    fn reorientation_preserves_classes(seed in any::<u64>(), flips in prop::collection::vec(any::<bool>(), 6)) {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let s = common::random_arrangement(&mut rng, 2, 4).covectors(DEFAULT_SEED).unwrap();
        let n = s.ground_len();
        let set = ElemSet::from_indices(n, (0..n).filter(|&i| flips[i]));
        let tau = Reorientation::flipping(set);
        let r = s.reorient(&tau).unwrap();
        prop_assert!(is_aom(&r) && is_com(&r));
        prop_assert_eq!(r.reorient(&tau).unwrap().to_json(), s.to_json());
    }
}
