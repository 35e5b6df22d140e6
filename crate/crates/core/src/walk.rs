//! Seeded random walks in the flip graph.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::complex::Triangulation;
use crate::driver::FlipPath;
use crate::flips::{apply_unchecked, flippable_moves};

/// Takes `steps` uniformly random flips from `start`. Stops early only at a
/// triangulation without flips.
pub fn random_walk(start: &Triangulation, steps: usize, seed: u64) -> FlipPath {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut path = FlipPath::empty(start);
    for _ in 0..steps {
        let moves = flippable_moves(&path.end);
        let Some(m) = moves.choose(&mut rng) else { break };
        path.end = apply_unchecked(&path.end, m);
        path.moves.push(m.clone());
    }
    path
}

/// Calls `visit` on every triangulation along a random walk, including the
/// start; stops when `visit` returns false.
pub fn walk_visit(start: &Triangulation, steps: usize, seed: u64, mut visit: impl FnMut(&Triangulation) -> bool) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = start.clone();
    if !visit(&t) {
        return;
    }
    for _ in 0..steps {
        let moves = flippable_moves(&t);
        let Some(m) = moves.choose(&mut rng) else { break };
        t = apply_unchecked(&t, m);
        if !visit(&t) {
            return;
        }
    }
}
