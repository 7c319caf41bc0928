//! Shared fixtures for the benchmarks.

use num_complex::Complex64;
use orfkit_core::{CircleMeasure, OrfSystem, PoleSequence, RandomConfig};

pub const SEED: u64 = 7;

/// Poles and recurrence parameters drawn from a fixed seed.
pub fn random_config(n_max: usize) -> RandomConfig {
    RandomConfig::generate(SEED, n_max, 0.7, 0.6)
}

pub fn random_system(n_max: usize) -> OrfSystem {
    random_config(n_max).synthesize().expect("fixture parameters are valid")
}

/// Poles spread on a ring of radius 0.5 with `beta_0 = 0`.
pub fn ring_poles(n_max: usize) -> PoleSequence {
    let mut betas = vec![Complex64::new(0.0, 0.0)];
    betas.extend((1..=n_max).map(|k| Complex64::from_polar(0.5, k as f64)));
    PoleSequence::new(betas).expect("ring poles lie in the disk")
}

pub fn poisson_measure() -> CircleMeasure {
    CircleMeasure::poisson(Complex64::new(0.3, -0.2)).expect("alpha lies in the disk")
}
