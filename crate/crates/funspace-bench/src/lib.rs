//! Shared input builders for the benchmark suite.

use funspace_core::{BoxDomain, SampledFunction};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Seeded random function on `[0, 2)` with the given cell count.
pub fn random_function(seed: u64, cells: usize) -> SampledFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bd = BoxDomain::interval(0.0, 2.0).unwrap();
    let values: Vec<f64> = (0..cells).map(|_| rng.gen_range(-2.0..2.0)).collect();
    SampledFunction::new(bd, vec![cells], values).unwrap()
}

/// Compactly supported hat on `[-1, 3)` for modulus benchmarks.
pub fn centered_hat(cells: usize) -> SampledFunction {
    let bd = BoxDomain::interval(-1.0, 3.0).unwrap();
    let cell = 4.0 / cells as f64;
    let values: Vec<f64> = (0..cells)
        .map(|i| {
            let x = -1.0 + (i as f64 + 0.5) * cell;
            (1.0 - (x - 0.5).abs() / 0.5).max(0.0)
        })
        .collect();
    SampledFunction::new(bd, vec![cells], values).unwrap()
}
