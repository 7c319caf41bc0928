use num_complex::Complex64;

use super::OrfSystem;
use crate::error::{Error, Result};
use crate::poly;
use crate::ratfun::RatFun;

/// Para-orthogonal pair `Phi = phi_n + tau phi_n^*`, `Psi = psi_n - tau psi_n^*`.
#[derive(Debug, Clone, PartialEq)]
pub struct ParaPair {
    pub n: usize,
    pub tau: Complex64,
    pub phi: RatFun,
    pub psi: RatFun,
}

pub fn para_pair(system: &OrfSystem, n: usize, tau: Complex64) -> Result<ParaPair> {
    if (tau.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::Domain(format!("tau must be unimodular, got {tau}")));
    }
    let level = system.level(n)?;
    let one = Complex64::new(1.0, 0.0);
    Ok(ParaPair {
        n,
        tau,
        phi: RatFun::combine(one, &level.phi, tau, &level.phi_star)?,
        psi: RatFun::combine(one, &level.psi, -tau, &level.psi_star)?,
    })
}

/// Zeros of `Phi_{n,tau}`, each checked to lie on the circle and to be simple.
pub fn para_zeros(pair: &ParaPair) -> Result<Vec<Complex64>> {
    if pair.phi.degree() == 0 {
        return Err(Error::Domain("para-orthogonal zeros need degree >= 1".into()));
    }
    let zeros = poly::roots(pair.phi.numer())?;
    for &z in &zeros {
        let deviation = (z.norm() - 1.0).abs();
        if deviation > 1e-9 {
            return Err(Error::ZeroOffCircle { zero: z, deviation });
        }
    }
    if let Some(separation) = min_separation(&zeros) {
        if separation <= 1e-8 {
            return Err(Error::ZeroCollision { separation });
        }
    }
    Ok(zeros)
}

pub(crate) fn min_separation(points: &[Complex64]) -> Option<f64> {
    let mut best: Option<f64> = None;
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            let d = (a - b).norm();
            best = Some(best.map_or(d, |x: f64| x.min(d)));
        }
    }
    best
}
