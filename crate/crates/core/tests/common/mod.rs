#![allow(dead_code)]

use propsel::fixtures::{gen_random, RandomFamily, RandomParams};
use propsel::Election;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Committee,
    PublicDecisions,
    Attributes,
    Explicit,
    Budget,
}

pub const MATROIDS: [Kind; 3] = [Kind::Committee, Kind::PublicDecisions, Kind::Attributes];
pub const MIXED: [Kind; 5] = [Kind::Committee, Kind::PublicDecisions, Kind::Attributes, Kind::Explicit, Kind::Budget];

/// A random instance of `kind` with `n <= max_n`, `m <= max_m`, drawn from
/// `seed`. Weights (1..=3) only when `weighted`.
pub fn instance(kind: Kind, seed: u64, max_n: usize, max_m: usize, weighted: bool) -> Election {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let n = rng.gen_range(1..=max_n);
    let mut m = rng.gen_range(2..=max_m);
    if kind == Kind::PublicDecisions && m % 2 == 1 {
        m -= 1;
    }
    let family = match kind {
        Kind::Committee => RandomFamily::Committee { k: rng.gen_range(1..=m) },
        Kind::PublicDecisions => RandomFamily::PublicDecisions,
        Kind::Attributes => RandomFamily::DisjointAttributes {
            groups: rng.gen_range(1..=m.min(3)),
        },
        Kind::Explicit => RandomFamily::Explicit { sets: 3 },
        Kind::Budget => RandomFamily::Budget,
    };
    let density = [(1, 3), (1, 2), (2, 3)][rng.gen_range(0..3)];
    let params = RandomParams {
        n,
        m,
        family,
        density,
        weights: weighted.then_some(3),
    };
    gen_random(&params, seed).expect("valid random parameters")
}

/// `count` instances cycling through `kinds`.
pub fn grid(kinds: &[Kind], count: usize, max_n: usize, max_m: usize, weighted: bool) -> Vec<(Kind, Election)> {
    (0..count)
        .map(|s| {
            let kind = kinds[s % kinds.len()];
            (kind, instance(kind, s as u64, max_n, max_m, weighted))
        })
        .collect()
}
