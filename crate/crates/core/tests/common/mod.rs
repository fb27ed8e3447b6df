#![allow(dead_code)]

use omkit_core::rational::{q_frac, Q};
use omkit_core::realize::{FiniteArrangement, RationalHyperplane, DEFAULT_SEED};
use omkit_core::SignSystem;
use rand::Rng;

/// A random arrangement in dimension `1..=max_d` with `1..=max_n` hyperplanes.
/// Small integer normals and half-integer offsets make parallel and
/// concurrent hyperplanes common.
pub fn random_arrangement<R: Rng>(rng: &mut R, max_d: usize, max_n: usize) -> FiniteArrangement {
    let d = rng.gen_range(1..=max_d);
    let n = rng.gen_range(1..=max_n);
    let mut hs: Vec<RationalHyperplane> = Vec::new();
    while hs.len() < n {
        let normal: Vec<Q> = (0..d)
            .map(|_| Q::from_integer(rng.gen_range(-2..=2).into()))
            .collect();
        if normal.iter().all(|x| *x == Q::from_integer(0.into())) {
            continue;
        }
        let offset = q_frac(rng.gen_range(-4..=4), 2);
        let h = RationalHyperplane::new(format!("h{}", hs.len() + 1), normal, offset);
        if hs.iter().any(|g| g.coincides_with(&h)) {
            continue;
        }
        hs.push(h);
    }
    FiniteArrangement::new(d, hs).expect("distinct nonzero hyperplanes")
}

pub fn realized_systems(
    seed: u64,
    count: usize,
    max_d: usize,
    max_n: usize,
) -> Vec<(FiniteArrangement, SignSystem)> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let a = random_arrangement(&mut rng, max_d, max_n);
            let s = a.covectors(DEFAULT_SEED).expect("realizable");
            (a, s)
        })
        .collect()
}
