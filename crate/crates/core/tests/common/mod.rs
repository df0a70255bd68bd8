#![allow(dead_code)]

use qge::game::Game;
use qge::linalg;
use qge::rng::{self, Rng};
use qge::state::DensityMatrix;
use rand::Rng as _;

pub fn rng(seed: u64) -> Rng {
    rng::seeded(seed)
}

/// Utilities uniform in `[0, 1)`, flagged positively normalized.
pub fn random_unit_game(r: &mut Rng, counts: &[usize]) -> Game {
    let size: usize = counts.iter().product();
    let utilities = (0..counts.len())
        .map(|_| (0..size).map(|_| r.random::<f64>()).collect())
        .collect();
    Game::new(counts.to_vec(), utilities)
        .unwrap()
        .with_positive_normalization()
        .unwrap()
}

/// Utilities uniform in `[-5, 5)`.
pub fn random_game(r: &mut Rng, counts: &[usize]) -> Game {
    let size: usize = counts.iter().product();
    let utilities = (0..counts.len())
        .map(|_| (0..size).map(|_| r.random_range(-5.0..5.0)).collect())
        .collect();
    Game::new(counts.to_vec(), utilities).unwrap()
}

pub fn random_counts(r: &mut Rng, players: usize, max_m: usize) -> Vec<usize> {
    (0..players).map(|_| r.random_range(2..=max_m)).collect()
}

pub fn random_state(r: &mut Rng, dims: &[usize]) -> DensityMatrix {
    let d: usize = dims.iter().product();
    let rank = r.random_range(1..=d);
    DensityMatrix::new(dims.to_vec(), linalg::random_density(r, d, rank)).unwrap()
}
