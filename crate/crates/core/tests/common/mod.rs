#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use weaklg::UnimodularMatrix;

/// Product of a few elementary shears, a permutation and sign flips; entries
/// stay small so lattice boxes stay small.
pub fn random_unimodular(rng: &mut ChaCha8Rng) -> UnimodularMatrix {
    let mut m = UnimodularMatrix::IDENTITY;
    for _ in 0..3 {
        let i = rng.random_range(0..3);
        let j = (i + rng.random_range(1..3)) % 3;
        let mut rows = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
        rows[i][j] = if rng.random_bool(0.5) { 1 } else { -1 };
        m = UnimodularMatrix::new(rows).unwrap().compose(&m);
    }
    let mut perm = [0usize, 1, 2];
    for k in (1..3).rev() {
        perm.swap(k, rng.random_range(0..=k));
    }
    let mut rows = [[0i64; 3]; 3];
    for (r, &c) in perm.iter().enumerate() {
        rows[r][c] = if rng.random_bool(0.5) { 1 } else { -1 };
    }
    UnimodularMatrix::new(rows).unwrap().compose(&m)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
