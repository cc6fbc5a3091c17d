//! Input generators shared by the benchmark targets.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rsboole_core::Gf2Poly;

/// Deterministic dense polynomial of exactly the given degree with an odd
/// constant term, so factoring never short-circuits on a power of x.
pub fn dense_poly(degree: usize, seed: u64) -> Gf2Poly {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut exps = vec![0, degree];
    for e in 1..degree {
        if rng.gen_bool(0.5) {
            exps.push(e);
        }
    }
    Gf2Poly::from_exponents(&exps)
}
