use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub type SimRng = ChaCha8Rng;

/// Stream `index` of the ChaCha family keyed by `seed`. Replica `i` always
/// draws from stream `i`, so results do not depend on thread scheduling.
pub fn replica_rng(seed: u64, index: u64) -> SimRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Derives an independent seed for sub-experiment `k` (splitmix64 finaliser).
pub fn derive_seed(seed: u64, k: u64) -> u64 {
    let mut z = seed ^ k.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Runs `m` replicas in parallel, each with its own stream, and returns the
/// outputs in replica order.
pub fn run_replicas<T, F>(m: usize, seed: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut SimRng) -> T + Sync,
{
    let base = ChaCha8Rng::seed_from_u64(seed);
    (0..m)
        .into_par_iter()
        .map(|i| {
            let mut rng = base.clone();
            rng.set_stream(i as u64);
            f(&mut rng)
        })
        .collect()
}

/// Fallible variant of [`run_replicas`]; the first error in replica order wins.
pub fn try_run_replicas<T, E, F>(m: usize, seed: u64, f: F) -> Result<Vec<T>, E>
where
    T: Send,
    E: Send,
    F: Fn(&mut SimRng) -> Result<T, E> + Sync,
{
    run_replicas(m, seed, f).into_iter().collect()
}

const PAIRWISE_BLOCK: usize = 64;

/// Fixed-shape pairwise sum; the result depends only on the input order.
pub fn pairwise_sum(values: &[Complex64]) -> Complex64 {
    if values.len() <= PAIRWISE_BLOCK {
        return values.iter().sum();
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

pub fn pairwise_sum_real(values: &[f64]) -> f64 {
    if values.len() <= PAIRWISE_BLOCK {
        return values.iter().sum();
    }
    let mid = values.len() / 2;
    pairwise_sum_real(&values[..mid]) + pairwise_sum_real(&values[mid..])
}
