use std::f64::consts::TAU;
use std::sync::Arc;

use num_complex::Complex64;

use super::recurrence::extract_parameters;
use super::{Normalization, OrfLevel, OrfSystem, Source};
use crate::error::{Error, Result};
use crate::kernel::KernelParams;
use crate::measure::{default_grid, CircleMeasure, QuadRule};
use crate::poles::PoleSequence;
use crate::ratfun::RatFun;

/// Radius of the circle carrying the second-kind reconstruction nodes.
pub const SECOND_KIND_RADIUS: f64 = 0.3;

#[derive(Debug, Clone, PartialEq)]
pub struct EngineOptions {
    /// Quadrature size; `None` selects [`default_grid`].
    pub grid: Option<usize>,
    /// Largest accepted `|beta_k|` unless `allow_large_poles` is set.
    pub pole_cap: f64,
    pub allow_large_poles: bool,
    /// Gram-Schmidt breakdown threshold.
    pub rank_tolerance: f64,
}

impl Default for EngineOptions {
    fn default() -> Self {
        Self {
            grid: None,
            pole_cap: 0.9,
            allow_large_poles: false,
            rank_tolerance: 1e-10,
        }
    }
}

impl EngineOptions {
    pub fn check_poles(&self, poles: &PoleSequence) -> Result<()> {
        for (k, b) in poles.as_slice().iter().enumerate() {
            if b.norm() > self.pole_cap {
                if self.allow_large_poles {
                    log::warn!(
                        "|beta_{k}| = {} exceeds {}; quadrature may lose accuracy",
                        b.norm(),
                        self.pole_cap
                    );
                } else {
                    return Err(Error::Domain(format!(
                        "|beta_{k}| = {} exceeds the cap {} (set allow_large_poles to override)",
                        b.norm(),
                        self.pole_cap
                    )));
                }
            }
        }
        Ok(())
    }
}

pub fn gram_schmidt_orf(mu: &CircleMeasure, poles: &PoleSequence, n_max: usize) -> Result<OrfSystem> {
    gram_schmidt_orf_with(mu, poles, n_max, &EngineOptions::default())
}

/// Orthonormalizes `B_0, ..., B_{n_max}` under `mu` with modified
/// Gram-Schmidt (two passes), fixing the phase so that `phi_n^*(beta_n) > 0`.
pub fn gram_schmidt_orf_with(
    mu: &CircleMeasure,
    poles: &PoleSequence,
    n_max: usize,
    opts: &EngineOptions,
) -> Result<OrfSystem> {
    if n_max > poles.max_level() {
        return Err(Error::Domain(format!(
            "n_max = {n_max} needs {n_max} poles beyond beta_0, only {} given",
            poles.max_level()
        )));
    }
    opts.check_poles(poles)?;
    let poles = Arc::new(poles.truncated(n_max));
    let rule = mu.quad_rule(opts.grid.unwrap_or_else(|| default_grid(n_max)))?;

    let mut phis: Vec<RatFun> = Vec::with_capacity(n_max + 1);
    let mut samples: Vec<Vec<Complex64>> = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let mut v = RatFun::blaschke(poles.clone(), n);
        let mut vals = rule.sample(&v)?;
        for _pass in 0..2 {
            for (phi, phi_vals) in phis.iter().zip(&samples) {
                let c = rule.inner_sampled(&vals, phi_vals);
                v = RatFun::combine(Complex64::new(1.0, 0.0), &v, -c, phi)?;
                for (x, y) in vals.iter_mut().zip(phi_vals) {
                    *x -= c * y;
                }
            }
        }
        let norm = rule.inner_sampled(&vals, &vals).re.max(0.0).sqrt();
        if norm < opts.rank_tolerance {
            return Err(Error::RankDeficiency { level: n, norm });
        }
        let mut phi = v.scale(Complex64::new(1.0 / norm, 0.0));
        let s = phi.superstar().eval(poles.beta(n))?;
        let phase = if s.norm() > 0.0 {
            s / s.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        phi = phi.scale(phase);
        let scale = phase / norm;
        samples.push(vals.iter().map(|x| x * scale).collect());
        phis.push(phi);
    }

    let kp = KernelParams::new(poles.beta(0))?;
    let mut levels: Vec<OrfLevel> = Vec::with_capacity(n_max + 1);
    for (n, phi) in phis.into_iter().enumerate() {
        let psi = second_kind_from_rule(&rule, &kp, &phi)?;
        let (lambda, e, rho, d) = if n == 0 {
            (None, None, Complex64::new(1.0, 0.0), 2.0 * phi.numer()[0].norm_sqr())
        } else {
            let prev = &levels[n - 1];
            let fit = extract_parameters(&poles, prev, &phi)?;
            let ratio = poles.varpi(n, poles.beta(n)).re / poles.varpi(n - 1, poles.beta(n - 1)).re;
            let d = fit.e * fit.e / (ratio / (1.0 - fit.lambda.norm_sqr())) * prev.d;
            (Some(fit.lambda), Some(fit.e), fit.rho, d)
        };
        levels.push(OrfLevel {
            n,
            phi_star: phi.superstar(),
            psi_star: psi.superstar(),
            phi,
            psi,
            lambda,
            e,
            rho,
            d,
        });
    }
    Ok(OrfSystem::from_parts(
        poles,
        levels,
        Normalization::Orthonormal,
        Source::Measure(mu.clone()),
    ))
}

/// `psi_n` from its integral definition under `mu`, reconstructed in `L_n`
/// from `n + 1` interior nodes.
pub fn second_kind_integral(mu: &CircleMeasure, system: &OrfSystem, n: usize, grid: usize) -> Result<RatFun> {
    let rule = mu.quad_rule(grid)?;
    let kp = KernelParams::new(system.poles().beta(0))?;
    second_kind_from_rule(&rule, &kp, &system.level(n)?.phi)
}

pub(crate) fn second_kind_from_rule(rule: &QuadRule, kp: &KernelParams, phi: &RatFun) -> Result<RatFun> {
    let n = phi.degree();
    let poles = phi.poles().clone();
    let phi_t = rule.sample(phi)?;
    let zt: Vec<Complex64> = rule.nodes().iter().map(|&t| kp.zeta0(t)).collect::<Result<_>>()?;
    let m = n + 1;
    let mut values = Vec::with_capacity(m);
    for k in 0..m {
        let z = Complex64::from_polar(SECOND_KIND_RADIUS, TAU * k as f64 / m as f64);
        let zz = kp.zeta0(z)?;
        let pz = phi.eval(z)?;
        let mut s = Complex64::new(0.0, 0.0);
        for ((&w, &ft), &st) in rule.weights().iter().zip(&phi_t).zip(&zt) {
            let d = (st + zz) / (st - zz);
            s += w * (d * (ft - pz) + ft);
        }
        let v = s * poles.pi(n, z);
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(Error::InterpolationSingular(n));
        }
        values.push(v);
    }
    // inverse DFT on the scaled roots of unity
    let numer: Vec<Complex64> = (0..m)
        .map(|j| {
            let s: Complex64 = values
                .iter()
                .enumerate()
                .map(|(k, v)| v * Complex64::from_polar(1.0, -TAU * (j * k) as f64 / m as f64))
                .sum();
            s / (m as f64 * SECOND_KIND_RADIUS.powi(j as i32))
        })
        .collect();
    RatFun::new(poles, numer)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::circle_points;
    use crate::measure::gram_matrix;
    use crate::measure::identity_deviation;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn lebesgue_polynomial_case_gives_monomials() {
        let sys = gram_schmidt_orf(&CircleMeasure::lebesgue(), &PoleSequence::zeros(4), 3).unwrap();
        for (n, level) in sys.levels().iter().enumerate() {
            for (k, coeff) in level.phi.numer().iter().enumerate() {
                let target = if k == n { 1.0 } else { 0.0 };
                assert!((coeff - target).norm() < 1e-13);
            }
            if n > 0 {
                assert!(level.lambda.unwrap().norm() < 1e-12);
            }
            assert!((level.d - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn rational_lebesgue_first_level() {
        let poles = PoleSequence::new(vec![c(0.0, 0.0), c(0.5, 0.0), c(0.0, 0.0)]).unwrap();
        let sys = gram_schmidt_orf(&CircleMeasure::lebesgue(), &poles, 2).unwrap();
        let h = 0.75f64.sqrt();
        for z in circle_points(1.0, 64, 0.0) {
            let expect = h * z / (1.0 - 0.5 * z);
            assert!((sys.level(1).unwrap().phi.eval(z).unwrap() - expect).norm() < 1e-12);
            // psi_n = phi_n for the Lebesgue measure
            let l = sys.level(2).unwrap();
            assert!((l.psi.eval(z).unwrap() - l.phi.eval(z).unwrap()).norm() < 1e-10);
        }
    }

    #[test]
    fn gram_matrix_is_identity() {
        let poles = PoleSequence::new(vec![
            c(0.1, 0.2),
            c(0.6, -0.3),
            c(-0.7, 0.0),
            c(0.0, 0.8),
            c(0.3, 0.3),
            c(-0.2, -0.5),
        ])
        .unwrap();
        let mu = CircleMeasure::poisson(c(0.4, 0.1)).unwrap();
        let sys = gram_schmidt_orf(&mu, &poles, 5).unwrap();
        let phis: Vec<RatFun> = sys.levels().iter().map(|l| l.phi.clone()).collect();
        let g = gram_matrix(&mu.quad_rule(2048).unwrap(), &phis).unwrap();
        assert!(identity_deviation(&g) < 1e-12);
    }

    #[test]
    fn large_poles_need_the_override() {
        let poles = PoleSequence::new(vec![c(0.0, 0.0), c(0.95, 0.0)]).unwrap();
        assert!(gram_schmidt_orf(&CircleMeasure::lebesgue(), &poles, 1).is_err());
        let opts = EngineOptions {
            allow_large_poles: true,
            ..EngineOptions::default()
        };
        assert!(gram_schmidt_orf_with(&CircleMeasure::lebesgue(), &poles, 1, &opts).is_ok());
    }
}
