//! Benchmark fixtures for the Kuranishi engine.

use kuranishi_core::fuzz::{case_rng, random_torus_cocycle, random_vector_form, FuzzBounds};
use kuranishi_core::{Geometry, VForm};

/// Harmonic `(0,1)` cocycle on `T^n` with one parameter, truncated at `order`.
pub fn torus_cocycle(n: usize, order: u32, seed: u64) -> VForm {
    let mut rng = case_rng(seed, 0);
    random_torus_cocycle(&mut rng, Geometry::torus(n, 1, order), &FuzzBounds::default())
}

/// Two random vector-valued `(0,1)` forms on `T^n` for the bracket.
pub fn bracket_pair(n: usize, order: u32, seed: u64) -> (VForm, VForm) {
    let mut rng = case_rng(seed, 1);
    let g = Geometry::torus(n, 1, order);
    let b = FuzzBounds::default();
    (random_vector_form(&mut rng, g, 1, 0, 2, &b), random_vector_form(&mut rng, g, 1, 0, 2, &b))
}
