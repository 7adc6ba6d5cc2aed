//! Seeded parameter draws. Draw `i` of a seed comes from its own ChaCha
//! stream, so results do not depend on evaluation order or thread count.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::ModelParams;

pub fn stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Uniform valid draw: t in [0.5, 2], premium values uniform on the viable
/// triangle alpha + beta < 3t, r in [0, 2], lambda in [0, 1], v in [5, 20].
pub fn draw<R: Rng>(rng: &mut R) -> ModelParams {
    let t = rng.gen_range(0.5..=2.0);
    let (alpha, beta) = loop {
        let a = rng.gen_range(0.0..3.0 * t);
        let b = rng.gen_range(0.0..3.0 * t);
        if a + b < 3.0 * t {
            break (a, b);
        }
    };
    let r = rng.gen_range(0.0..=2.0);
    let lambda = rng.gen_range(0.0..=1.0);
    let v = rng.gen_range(5.0..=20.0);
    ModelParams::new(v, alpha, beta, t, r, lambda)
}

pub fn draws(seed: u64, n: usize) -> Vec<ModelParams> {
    (0..n).map(|i| draw(&mut stream(seed, i as u64))).collect()
}

/// `n` points of a Latin hypercube on `[0, 1)^dims`.
pub fn latin_hypercube<R: Rng>(rng: &mut R, n: usize, dims: usize) -> Vec<Vec<f64>> {
    let mut points = vec![vec![0.0; dims]; n];
    let mut strata: Vec<usize> = (0..n).collect();
    for d in 0..dims {
        strata.shuffle(rng);
        for (point, k) in points.iter_mut().zip(&strata) {
            point[d] = (*k as f64 + rng.gen::<f64>()) / n as f64;
        }
    }
    points
}

/// Default grid for the merger claims: r = 0, v = 10, lambda in (0, 1],
/// t in [0.5, 2), alpha and beta each in [0, 1.5t), so every point is viable.
pub fn merger_grid(seed: u64, n: usize) -> Vec<ModelParams> {
    latin_hypercube(&mut stream(seed, 0), n, 4)
        .into_iter()
        .map(|u| {
            let t = 0.5 + 1.5 * u[1];
            ModelParams::new(10.0, 1.5 * t * u[2], 1.5 * t * u[3], t, 0.0, 1.0 - u[0])
        })
        .collect()
}
