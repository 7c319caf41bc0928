use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::{Normalization, OrfLevel, OrfSystem, Source};
use crate::error::{Error, Result};
use crate::grid::circle_points;
use crate::poles::PoleSequence;
use crate::poly;
use crate::ratfun::RatFun;

const FIT_POINTS: usize = 16;
const FIT_TOLERANCE: f64 = 1e-9;

/// `e_n^2 = varpi_n(beta_n) / varpi_{n-1}(beta_{n-1}) / (1 - |lambda_n|^2)`.
pub(crate) fn orthonormal_e(poles: &PoleSequence, n: usize, lambda: Complex64) -> f64 {
    let ratio = poles.varpi(n, poles.beta(n)).re / poles.varpi(n - 1, poles.beta(n - 1)).re;
    (ratio / (1.0 - lambda.norm_sqr())).sqrt()
}

/// One step of the recurrence from level `n - 1` to level `n`, with `e_n`
/// fixed by the orthonormal normalization.
pub fn recurrence_step(
    prev: &OrfLevel,
    lambda: Complex64,
    rho: Complex64,
    poles: &Arc<PoleSequence>,
    n: usize,
) -> Result<OrfLevel> {
    if !(lambda.norm() < 1.0) {
        return Err(Error::ParameterOutOfDisk { level: n, lambda });
    }
    if n == 0 || n > poles.max_level() || prev.n + 1 != n {
        return Err(Error::Domain(format!(
            "cannot step from level {} to level {n} over {} poles",
            prev.n,
            poles.max_level()
        )));
    }
    let e = orthonormal_e(poles, n, lambda);
    step_with(prev, lambda, rho, e, poles, n)
}

pub(crate) fn step_with(
    prev: &OrfLevel,
    lambda: Complex64,
    rho: Complex64,
    e: f64,
    poles: &Arc<PoleSequence>,
    n: usize,
) -> Result<OrfLevel> {
    let b = poles.beta(n - 1);
    let eta_prev = poles.eta(n - 1);
    // zeta_{n-1} varpi_{n-1} = eta_{n-1} (z - beta_{n-1}) and varpi_{n-1} as polynomials
    let shift =
        |p: &[Complex64]| -> Vec<Complex64> { poly::mul_root(p, b).into_iter().map(|c| c * eta_prev).collect() };
    let unit = |p: &[Complex64]| poly::mul_unit(p, b.conj());
    let add = |x: Vec<Complex64>, s: Complex64, y: Vec<Complex64>, t: Complex64| -> Vec<Complex64> {
        x.iter().zip(&y).map(|(a, c)| s * a + t * c).collect()
    };
    let top = e * rho;
    let bottom = e * rho.conj() * eta_prev.conj() * poles.eta(n);
    let one = Complex64::new(1.0, 0.0);

    let zp = shift(prev.phi.numer());
    let wp = unit(prev.phi_star.numer());
    let zq = shift(prev.psi.numer());
    let wq = unit(prev.psi_star.numer());

    let phi = add(zp.clone(), top, wp.clone(), top * lambda.conj());
    let phi_star = add(zp, bottom * lambda, wp, bottom);
    let psi = add(zq.clone(), top, wq.clone(), -top * lambda.conj());
    let psi_star = add(wq, bottom, zq, -bottom * lambda);

    let phi = RatFun::new(poles.clone(), phi)?;
    let phi_star = RatFun::new(poles.clone(), phi_star)?;
    let psi = RatFun::new(poles.clone(), psi)?;
    let psi_star = RatFun::new(poles.clone(), psi_star)?;

    for (f, fs, name) in [(&phi, &phi_star, "phi"), (&psi, &psi_star, "psi")] {
        let gap = f.superstar().coeff_distance(fs).unwrap_or(f64::INFINITY);
        if gap > 1e-12 * (one.re + f.coeff_scale()) {
            return Err(Error::Invariant(format!(
                "superstar of {name}_{n} disagrees with the recurrence by {gap:e}"
            )));
        }
    }

    let ratio = poles.varpi(n, poles.beta(n)).re / poles.varpi(n - 1, poles.beta(n - 1)).re;
    let d = e * e / (ratio / (1.0 - lambda.norm_sqr())) * prev.d;
    Ok(OrfLevel {
        n,
        phi,
        phi_star,
        psi,
        psi_star,
        lambda: Some(lambda),
        e: Some(e),
        rho,
        d,
    })
}

/// Builds the orthonormal system generated by the given parameters with
/// `rho_n = 1` and `phi_0 = psi_0 = phi0`.
pub fn synthesize(lambdas: &[Complex64], poles: &PoleSequence, phi0: Complex64) -> Result<OrfSystem> {
    if (phi0.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::Domain(format!("phi_0 must be unimodular, got {phi0}")));
    }
    let n_max = lambdas.len();
    if n_max > poles.max_level() {
        return Err(Error::Domain(format!(
            "{n_max} parameters need {} poles beyond beta_0, only {} given",
            n_max,
            poles.max_level()
        )));
    }
    let poles = Arc::new(poles.truncated(n_max));
    let mut levels = vec![OrfLevel::initial(poles.clone(), phi0)];
    for (i, &lambda) in lambdas.iter().enumerate() {
        let next = recurrence_step(&levels[i], lambda, Complex64::new(1.0, 0.0), &poles, i + 1)?;
        levels.push(next);
    }
    Ok(OrfSystem::from_parts(
        poles,
        levels,
        Normalization::Orthonormal,
        Source::Parameters,
    ))
}

/// Recurrence parameters recovered from two consecutive levels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FittedParameters {
    pub lambda: Complex64,
    pub e: f64,
    pub rho: Complex64,
    pub residual: f64,
}

/// Least-squares inversion of the first row of the recurrence:
/// `phi_n varpi_n / varpi_{n-1} = a zeta_{n-1} phi_{n-1} + b phi_{n-1}^*`,
/// giving `lambda_n = conj(b / a)`, `e_n = |a|`, `rho_n = a / |a|`.
pub fn extract_parameters(poles: &PoleSequence, prev: &OrfLevel, phi: &RatFun) -> Result<FittedParameters> {
    let n = prev.n + 1;
    let points = circle_points(1.0, FIT_POINTS, 0.1);
    let mut m = DMatrix::<Complex64>::zeros(FIT_POINTS, 2);
    let mut rhs = DVector::<Complex64>::zeros(FIT_POINTS);
    let mut scale: f64 = 0.0;
    for (j, &z) in points.iter().enumerate() {
        let v = phi.eval(z)?;
        scale = scale.max(v.norm());
        rhs[j] = v * poles.varpi(n, z) / poles.varpi(n - 1, z);
        m[(j, 0)] = poles.blaschke_factor(n - 1, z)? * prev.phi.eval(z)?;
        m[(j, 1)] = prev.phi_star.eval(z)?;
    }
    let sol = m
        .clone()
        .svd(true, true)
        .solve(&rhs, 1e-14)
        .map_err(|e| Error::Invariant(format!("recurrence fit failed: {e}")))?;
    let residual = (&m * &sol - &rhs).iter().map(|c| c.norm()).fold(0.0, f64::max) / scale.max(f64::MIN_POSITIVE);
    if residual > FIT_TOLERANCE {
        return Err(Error::FitResidualTooLarge {
            level: n,
            residual,
            limit: FIT_TOLERANCE,
        });
    }
    let (a, b) = (sol[0], sol[1]);
    if a.norm() == 0.0 {
        return Err(Error::Invariant(format!("recurrence fit at level {n} has a = 0")));
    }
    let lambda = (b / a).conj();
    if !(lambda.norm() < 1.0) {
        return Err(Error::ParameterOutOfDisk { level: n, lambda });
    }
    Ok(FittedParameters {
        lambda,
        e: a.norm(),
        rho: a / a.norm(),
        residual,
    })
}
