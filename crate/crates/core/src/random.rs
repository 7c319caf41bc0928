//! Seeded pole and parameter configurations for randomized checks.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::orf::{synthesize, OrfSystem};
use crate::poles::PoleSequence;

/// Uniform point in the disk of radius `r_max`.
pub fn disk_point(rng: &mut impl Rng, r_max: f64) -> Complex64 {
    let r = r_max * rng.gen::<f64>().sqrt();
    Complex64::from_polar(r, TAU * rng.gen::<f64>())
}

pub fn disk_sample(rng: &mut impl Rng, count: usize, r_max: f64) -> Vec<Complex64> {
    (0..count).map(|_| disk_point(rng, r_max)).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct RandomConfig {
    pub poles: PoleSequence,
    pub lambdas: Vec<Complex64>,
}

impl RandomConfig {
    /// `n_max + 1` poles with `|beta| <= beta_max` and `n_max` parameters with
    /// `|lambda| <= lambda_max`.
    pub fn generate(seed: u64, n_max: usize, beta_max: f64, lambda_max: f64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let beta = disk_sample(&mut rng, n_max + 1, beta_max);
        let lambdas = disk_sample(&mut rng, n_max, lambda_max);
        Self {
            poles: PoleSequence::new(beta).expect("sampled poles lie inside the disk"),
            lambdas,
        }
    }

    pub fn synthesize(&self) -> Result<OrfSystem> {
        synthesize(&self.lambdas, &self.poles, Complex64::new(1.0, 0.0))
    }
}
