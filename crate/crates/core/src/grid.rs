//! Sample-point helpers shared by checks and tests.

use std::f64::consts::TAU;

use num_complex::Complex64;

/// `m` equispaced points on the circle of radius `r`, starting at angle `offset`.
pub fn circle_points(r: f64, m: usize, offset: f64) -> Vec<Complex64> {
    (0..m)
        .map(|j| Complex64::from_polar(r, offset + TAU * j as f64 / m as f64))
        .collect()
}

/// Uniform angles `2 pi j / n`, `j = 0..n`.
pub fn uniform_angles(n: usize) -> Vec<f64> {
    (0..n).map(|j| TAU * j as f64 / n as f64).collect()
}

/// A polar grid of interior points with radii up to `r_max`, avoiding the
/// listed points by at least `gap`.
pub fn disk_points(r_max: f64, rings: usize, per_ring: usize, avoid: &[Complex64], gap: f64) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(rings * per_ring);
    for i in 1..=rings {
        let r = r_max * i as f64 / rings as f64;
        for z in circle_points(r, per_ring, 0.37 * i as f64) {
            if avoid.iter().all(|a| (z - a).norm() >= gap) {
                out.push(z);
            }
        }
    }
    out
}
