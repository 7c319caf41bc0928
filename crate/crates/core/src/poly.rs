//! Dense complex polynomials in ascending coefficient order.
//!
//! Only the handful of operations the rational-function layer needs:
//! Horner evaluation, products, exact division by linear factors, and root
//! finding through the companion matrix.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

pub fn horner(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(ZERO, |acc, &c| acc * z + c)
}

/// Derivative evaluated at `z`.
pub fn horner_derivative(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .rev()
        .fold(ZERO, |acc, (k, &c)| acc * z + c * k as f64)
}

pub fn mul(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![ZERO; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Multiplies by the linear factor `(z - root)`.
pub fn mul_root(p: &[Complex64], root: Complex64) -> Vec<Complex64> {
    mul(p, &[-root, ONE])
}

/// Multiplies by `(1 - c z)`.
pub fn mul_unit(p: &[Complex64], c: Complex64) -> Vec<Complex64> {
    mul(p, &[ONE, -c])
}

/// Product of `(z - r)` over all roots.
pub fn from_roots(roots: &[Complex64]) -> Vec<Complex64> {
    roots.iter().fold(vec![ONE], |acc, &r| mul_root(&acc, r))
}

/// Product of `(1 - conj(b) z)` over the given points.
pub fn from_unit_factors(points: &[Complex64]) -> Vec<Complex64> {
    points.iter().fold(vec![ONE], |acc, b| mul_unit(&acc, b.conj()))
}

/// Divides the declared-degree polynomial `p` by `(z - a)`.
///
/// Runs the synthetic division from the top coefficient down, which is stable
/// for `|a| <= 1`. Returns the quotient (one degree lower) and the remainder.
pub fn div_root(p: &[Complex64], a: Complex64) -> (Vec<Complex64>, Complex64) {
    let m = p.len() - 1;
    if m == 0 {
        return (Vec::new(), p[0]);
    }
    let mut q = vec![ZERO; m];
    q[m - 1] = p[m];
    for k in (1..m).rev() {
        q[k - 1] = p[k] + a * q[k];
    }
    let rem = p[0] + a * q[0];
    (q, rem)
}

/// Divides the declared-degree polynomial `p` by `(1 - c z)`.
///
/// Runs from the constant term upwards, stable for `|c| <= 1`. When `c = 0`
/// the remainder is just the top coefficient, so the declared degree drops by
/// one exactly as for any other factor.
pub fn div_unit(p: &[Complex64], c: Complex64) -> (Vec<Complex64>, Complex64) {
    let m = p.len() - 1;
    if m == 0 {
        return (Vec::new(), p[0]);
    }
    let mut q = vec![ZERO; m];
    q[0] = p[0];
    for k in 1..m {
        q[k] = p[k] + c * q[k - 1];
    }
    let rem = p[m] + c * q[m - 1];
    (q, rem)
}

pub fn max_abs(p: &[Complex64]) -> f64 {
    p.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

/// All roots of `p` via the eigenvalues of its companion matrix, each followed
/// by one Newton step on the original polynomial.
///
/// Leading coefficients that vanish relative to the polynomial's scale are
/// trimmed first.
pub fn roots(p: &[Complex64]) -> Result<Vec<Complex64>> {
    let scale = max_abs(p);
    if scale == 0.0 {
        return Err(Error::Domain("roots of the zero polynomial".into()));
    }
    let mut deg = p.len() - 1;
    while deg > 0 && p[deg].norm() <= 1e-14 * scale {
        deg -= 1;
    }
    if deg == 0 {
        return Ok(Vec::new());
    }
    let lead = p[deg];
    let mut companion = DMatrix::<Complex64>::zeros(deg, deg);
    for i in 1..deg {
        companion[(i, i - 1)] = ONE;
    }
    for i in 0..deg {
        companion[(i, deg - 1)] = -p[i] / lead;
    }
    let eig = companion
        .eigenvalues()
        .ok_or_else(|| Error::Invariant("companion eigenvalue iteration did not converge".into()))?;
    let trimmed = &p[..=deg];
    Ok(eig
        .iter()
        .map(|&z| {
            let d = horner_derivative(trimmed, z);
            if d.norm() > 0.0 {
                z - horner(trimmed, z) / d
            } else {
                z
            }
        })
        .collect())
}
