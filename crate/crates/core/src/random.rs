//! Seeded samplers. Trial `i` of a run with seed `s` always draws from the same
//! stream, independent of scheduling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::scalar::{int, Scalar};

pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Uniform integer coefficient in `-2..=2`.
pub fn small_scalar<R: Rng>(rng: &mut R) -> Scalar {
    int(rng.gen_range(-2..=2))
}

pub fn small_vector<R: Rng>(rng: &mut R, n: usize) -> Vec<Scalar> {
    (0..n).map(|_| small_scalar(rng)).collect()
}

/// Vector with at most `terms` nonzero small coefficients at random positions.
pub fn sparse_vector<R: Rng>(rng: &mut R, n: usize, terms: usize) -> Vec<Scalar> {
    let mut v = vec![int(0); n];
    if n == 0 {
        return v;
    }
    for _ in 0..terms {
        let i = rng.gen_range(0..n);
        v[i] += small_scalar(rng);
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible() {
        let a = small_vector(&mut trial_rng(7, 3), 20);
        let b = small_vector(&mut trial_rng(7, 3), 20);
        let c = small_vector(&mut trial_rng(7, 4), 20);
        assert_eq!(a, b);
        assert_ne!(a, c);
    }
}
