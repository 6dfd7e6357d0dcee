#![allow(dead_code)]

use cdut::PointSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform(rng: &mut ChaCha8Rng, n: usize, dim: usize, half_width: f64) -> PointSet {
    let coords = (0..n * dim)
        .map(|_| rng.random_range(-half_width..half_width))
        .collect();
    PointSet::new(dim, coords).unwrap()
}

/// Random 1D pair with sizes in `1..=max` and coordinates in [-100, 100].
pub fn instance_1d(rng: &mut ChaCha8Rng, max: usize) -> (PointSet, PointSet) {
    let m = rng.random_range(1..=max);
    let n = rng.random_range(1..=max);
    (uniform(rng, m, 1, 100.0), uniform(rng, n, 1, 100.0))
}

pub fn close(x: f64, y: f64, rel: f64) -> bool {
    (x - y).abs() <= rel * x.abs().max(y.abs()).max(1.0)
}
