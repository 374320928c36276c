//! Low-discrepancy and seeded point generation.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Van der Corput radical inverse of `index` in `base`.
pub fn radical_inverse(mut index: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut f = inv;
    let mut x = 0.0;
    while index > 0 {
        x += (index % base) as f64 * f;
        index /= base;
        f *= inv;
    }
    x
}

const PRIMES: [u64; 8] = [2, 3, 5, 7, 11, 13, 17, 19];

/// Halton point of dimension `D ≤ 8`; index 0 is skipped so no coordinate
/// is exactly zero.
pub fn halton<const D: usize>(index: u64) -> [f64; D] {
    let mut out = [0.0; D];
    for (d, o) in out.iter_mut().enumerate() {
        *o = radical_inverse(index + 1, PRIMES[d]);
    }
    out
}

/// Seeded generator used wherever the toolkit draws random samples.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `n` uniform points of the unit square from a seed.
pub fn uniform_pairs(seed: u64, n: usize) -> Vec<(f64, f64)> {
    let mut rng = seeded_rng(seed);
    (0..n).map(|_| (rng.gen::<f64>(), rng.gen::<f64>())).collect()
}
