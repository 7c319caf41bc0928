//! Pole sequences and the Blaschke factors and products built on them.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly;

/// Relative guard used before dividing by `1 - conj(b) z` or `z - b`.
pub fn pole_tolerance(z: Complex64) -> f64 {
    1e-13 * (1.0 + z.norm())
}

/// The points `beta_0, beta_1, ...` inside the open unit disk.
///
/// `beta_0` never enters the spaces `L_n`, only the kernels and the
/// normalization point of the Caratheodory function. Repeated points are
/// allowed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Complex64>", into = "Vec<Complex64>")]
pub struct PoleSequence {
    beta: Vec<Complex64>,
}

impl TryFrom<Vec<Complex64>> for PoleSequence {
    type Error = Error;

    fn try_from(beta: Vec<Complex64>) -> Result<Self> {
        Self::new(beta)
    }
}

impl From<PoleSequence> for Vec<Complex64> {
    fn from(p: PoleSequence) -> Self {
        p.beta
    }
}

impl PoleSequence {
    pub fn new(beta: Vec<Complex64>) -> Result<Self> {
        if beta.is_empty() {
            return Err(Error::Domain("a pole sequence needs at least beta_0".into()));
        }
        for (k, b) in beta.iter().enumerate() {
            if !(b.norm() < 1.0) {
                return Err(Error::Domain(format!("beta_{k} = {b} is not inside the unit disk")));
            }
        }
        Ok(Self { beta })
    }

    /// All points zero: the polynomial case.
    pub fn zeros(len: usize) -> Self {
        Self {
            beta: vec![Complex64::new(0.0, 0.0); len.max(1)],
        }
    }

    pub fn len(&self) -> usize {
        self.beta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.beta.is_empty()
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.beta
    }

    /// Highest level `n` for which `L_n` is defined.
    pub fn max_level(&self) -> usize {
        self.beta.len() - 1
    }

    pub fn beta(&self, k: usize) -> Complex64 {
        self.beta[k]
    }

    /// The sequence `beta_k, beta_{k+1}, ...` re-indexed from zero, so that the
    /// old `beta_k` becomes the new anchor.
    pub fn shifted(&self, k: usize) -> Self {
        Self {
            beta: self.beta[k..].to_vec(),
        }
    }

    /// Sequence `beta_0..beta_n`.
    pub fn truncated(&self, n: usize) -> Self {
        Self {
            beta: self.beta[..=n].to_vec(),
        }
    }

    /// Anchor followed by the given interior points, as used for product spaces.
    pub fn from_parts(anchor: Complex64, points: impl IntoIterator<Item = Complex64>) -> Self {
        let mut beta = vec![anchor];
        beta.extend(points);
        Self { beta }
    }

    pub fn eta(&self, k: usize) -> Complex64 {
        let b = self.beta[k];
        if b.norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            b.conj() / b.norm()
        }
    }

    /// `varpi_k(z) = 1 - conj(beta_k) z`.
    pub fn varpi(&self, k: usize, z: Complex64) -> Complex64 {
        1.0 - self.beta[k].conj() * z
    }

    /// `varpi_k^*(z) = z - beta_k`.
    pub fn varpi_star(&self, k: usize, z: Complex64) -> Complex64 {
        z - self.beta[k]
    }

    /// `upsilon_n = eta_1 ... eta_n`, unimodular.
    pub fn upsilon(&self, n: usize) -> Complex64 {
        (1..=n).map(|j| self.eta(j)).product()
    }

    /// `pi_n(z) = prod_{j=1..n} varpi_j(z)` as coefficients.
    pub fn pi_coeffs(&self, n: usize) -> Vec<Complex64> {
        poly::from_unit_factors(&self.beta[1..=n])
    }

    pub fn pi(&self, n: usize, z: Complex64) -> Complex64 {
        (1..=n).map(|j| self.varpi(j, z)).product()
    }

    /// `pi_n^*(z) = prod_{j=1..n} (z - beta_j)`.
    pub fn pi_star(&self, n: usize, z: Complex64) -> Complex64 {
        (1..=n).map(|j| z - self.beta[j]).product()
    }

    /// Fails when `z` sits on one of the poles `1/conj(beta_j)`, `j = 1..=n`.
    pub fn check_poles(&self, n: usize, z: Complex64) -> Result<()> {
        let tol = pole_tolerance(z);
        for j in 1..=n {
            if self.varpi(j, z).norm() < tol {
                return Err(Error::PoleProximity {
                    z,
                    pole: 1.0 / self.beta[j].conj(),
                });
            }
        }
        Ok(())
    }

    /// Blaschke factor `zeta_k(z) = eta_k (z - beta_k) / (1 - conj(beta_k) z)`.
    pub fn blaschke_factor(&self, k: usize, z: Complex64) -> Result<Complex64> {
        let den = self.varpi(k, z);
        if den.norm() < pole_tolerance(z) {
            return Err(Error::PoleProximity {
                z,
                pole: 1.0 / self.beta[k].conj(),
            });
        }
        Ok(self.eta(k) * self.varpi_star(k, z) / den)
    }

    /// Blaschke product `B_k`, with `B_{-1} = 1/zeta_0` and `B_0 = 1`.
    pub fn blaschke_product(&self, k: isize, z: Complex64) -> Result<Complex64> {
        if k < 0 {
            let z0 = self.blaschke_factor(0, z)?;
            if z0.norm() < pole_tolerance(z) {
                return Err(Error::DivisionByZeroBlaschke(self.beta[0]));
            }
            return Ok(1.0 / z0);
        }
        let mut b = Complex64::new(1.0, 0.0);
        for j in 1..=k as usize {
            b *= self.blaschke_factor(j, z)?;
        }
        Ok(b)
    }

    /// `zeta_0(z) B_m(z)` for `m >= -1`; equals 1 for `m = -1` and vanishes
    /// exactly at `beta_0, ..., beta_m`.
    pub fn zeta0_blaschke(&self, m: isize, z: Complex64) -> Result<Complex64> {
        if m < 0 {
            return Ok(Complex64::new(1.0, 0.0));
        }
        let mut b = self.blaschke_factor(0, z)?;
        for j in 1..=m as usize {
            b *= self.blaschke_factor(j, z)?;
        }
        Ok(b)
    }

    /// `P_n(z) B_n(z)` in the cancelled form
    /// `kappa_n varpi_0(z)(z - beta_0) pi_{n-1}^*(z) / (varpi_n(z) pi_n(z))`,
    /// which stays finite at `z = beta_n`.
    pub fn poisson_blaschke(&self, n: usize, z: Complex64) -> Result<Complex64> {
        if n == 0 {
            return Ok(Complex64::new(1.0, 0.0));
        }
        self.check_poles(n, z)?;
        let vn = self.varpi(n, z);
        if vn.norm() < pole_tolerance(z) {
            return Err(Error::PoleProximity {
                z,
                pole: 1.0 / self.beta[n].conj(),
            });
        }
        let kappa = self.upsilon(n) * self.varpi(n, self.beta[n]) / self.varpi(0, self.beta[0]);
        Ok(kappa * self.varpi(0, z) * self.varpi_star(0, z) * self.pi_star(n - 1, z) / (vn * self.pi(n, z)))
    }
}
