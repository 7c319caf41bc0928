//! Riesz-Herglotz and Poisson kernels anchored at `beta_0`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::poles::pole_tolerance;

/// Boundary tolerance for arguments that must lie on the unit circle.
pub const CIRCLE_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelParams {
    beta0: Complex64,
}

impl KernelParams {
    pub fn new(beta0: Complex64) -> Result<Self> {
        if !(beta0.norm() < 1.0) {
            return Err(Error::Domain(format!("beta_0 = {beta0} is not inside the unit disk")));
        }
        Ok(Self { beta0 })
    }

    pub fn beta0(&self) -> Complex64 {
        self.beta0
    }

    fn eta0(&self) -> Complex64 {
        if self.beta0.norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            self.beta0.conj() / self.beta0.norm()
        }
    }

    /// `zeta_0(z)`.
    pub fn zeta0(&self, z: Complex64) -> Result<Complex64> {
        let den = 1.0 - self.beta0.conj() * z;
        if den.norm() < pole_tolerance(z) {
            return Err(Error::PoleProximity {
                z,
                pole: 1.0 / self.beta0.conj(),
            });
        }
        Ok(self.eta0() * (z - self.beta0) / den)
    }

    /// Inverse Moebius map: the point `t` with `zeta_0(t) = s`.
    pub fn zeta0_inverse(&self, s: Complex64) -> Complex64 {
        let eta = self.eta0();
        (s + eta * self.beta0) / (eta + self.beta0.conj() * s)
    }

    /// `|dt/ds|` on the circle for `t = zeta_0^{-1}(s)`.
    pub fn zeta0_inverse_jacobian(&self, s: Complex64) -> f64 {
        let eta = self.eta0();
        (1.0 - self.beta0.norm_sqr()) / (eta + self.beta0.conj() * s).norm_sqr()
    }

    /// Riesz-Herglotz kernel `D(t, z) = (zeta_0(t) + zeta_0(z)) / (zeta_0(t) - zeta_0(z))`.
    pub fn herglotz(&self, t: Complex64, z: Complex64) -> Result<Complex64> {
        let zt = self.zeta0(t)?;
        let zz = self.zeta0(z)?;
        let den = zt - zz;
        if den.norm() < 1e-13 * (1.0 + zt.norm() + zz.norm()) {
            return Err(Error::KernelSingularity { t, z });
        }
        Ok((zt + zz) / den)
    }

    /// Poisson kernel `P(t, z)` for `t` on the circle, via the closed form
    /// `varpi_z(z) varpi_0(t) varpi_0^*(t) / (varpi_0(beta_0) varpi_z(t) varpi_z^*(t))`.
    pub fn poisson(&self, t: Complex64, z: Complex64) -> Result<Complex64> {
        if (t.norm() - 1.0).abs() > CIRCLE_TOLERANCE {
            return Err(Error::Domain(format!(
                "Poisson kernel needs |t| = 1, got |t| = {}",
                t.norm()
            )));
        }
        if !(z.norm() < 1.0) {
            return Err(Error::Domain(format!("Poisson kernel needs |z| < 1, got {z}")));
        }
        let b0 = self.beta0;
        let num = (1.0 - z.norm_sqr()) * (1.0 - b0.conj() * t) * (t - b0);
        let den = (1.0 - b0.norm_sqr()) * (1.0 - z.conj() * t) * (t - z);
        Ok(num / den)
    }
}
