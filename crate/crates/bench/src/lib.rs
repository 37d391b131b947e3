//! Input generators shared by the benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `dim` columns of `n` i.i.d. uniform draws on `[0, 1)`.
pub fn uniform_columns(n: usize, dim: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..dim).map(|_| (0..n).map(|_| rng.random::<f64>()).collect()).collect()
}

pub fn as_slices(cols: &[Vec<f64>]) -> Vec<&[f64]> {
    cols.iter().map(Vec::as_slice).collect()
}
