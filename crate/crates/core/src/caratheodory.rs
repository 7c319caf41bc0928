//! Caratheodory functions: holomorphic on the disk with positive real part,
//! normalized by `F(beta_0) = 1`.

use std::f64::consts::TAU;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::grid::circle_points;
use crate::kernel::KernelParams;
use crate::measure::CircleMeasure;
use crate::ratfun::RatFun;

/// Number of angle samples used to expand a measure into Herglotz moments.
pub const MOMENT_GRID: usize = 4096;

/// Radial approach used to read a density off the boundary values of `F`.
pub const BOUNDARY_RADIUS: f64 = 1.0 - 1e-6;

/// Points closer than this to a removable singularity are evaluated through
/// the mean value over a small surrounding circle.
const REMOVABLE_RADIUS: f64 = 1e-3;
const MEAN_VALUE_POINTS: usize = 32;

#[derive(Debug, Clone)]
enum Kind {
    /// `m_0 + 2 sum_k m_k zeta_0(z)^k` with moments of the measure pushed
    /// forward through `zeta_0`.
    Herglotz {
        kp: KernelParams,
        moments: Vec<Complex64>,
    },
    Ratio {
        num: RatFun,
        den: RatFun,
    },
    Transformed {
        a: RatFun,
        b: RatFun,
        c: RatFun,
        d: RatFun,
        base: Arc<CaratheodoryFn>,
        removable: Vec<Complex64>,
    },
}

#[derive(Debug, Clone)]
pub struct CaratheodoryFn {
    beta0: Complex64,
    kind: Kind,
}

/// `F(z) = L{D(t, z)}` for a normalized measure, anchored at `beta0`.
pub fn caratheodory_from_measure(mu: &CircleMeasure, beta0: Complex64) -> Result<CaratheodoryFn> {
    let kp = KernelParams::new(beta0)?;
    let m = MOMENT_GRID;
    let mut nu: Vec<Complex64> = (0..m)
        .map(|j| {
            let s = Complex64::from_polar(1.0, TAU * j as f64 / m as f64);
            let t = kp.zeta0_inverse(s);
            Complex64::new(mu.weight(t.arg()) * kp.zeta0_inverse_jacobian(s), 0.0)
        })
        .collect();
    FftPlanner::new().plan_fft_forward(m).process(&mut nu);
    let moments = nu.into_iter().take(m / 2).map(|c| c / m as f64).collect();
    Ok(CaratheodoryFn {
        beta0,
        kind: Kind::Herglotz { kp, moments },
    })
}

/// Density `w(theta)` against `dtheta / 2pi` of the measure behind `F`:
/// `Re F(r e^{i theta}) (1 - |beta_0|^2) / |e^{i theta} - beta_0|^2`, with the
/// first-order radial bias removed by one Richardson step.
pub fn weight_from_caratheodory(f: &CaratheodoryFn, beta0: Complex64, theta: f64) -> Result<f64> {
    let t = Complex64::from_polar(1.0, theta);
    let factor = (1.0 - beta0.norm_sqr()) / (t - beta0).norm_sqr();
    let r1 = BOUNDARY_RADIUS;
    let r2 = 1.0 - 2.0 * (1.0 - BOUNDARY_RADIUS);
    let w1 = f.eval(t * r1)?.re;
    let w2 = f.eval(t * r2)?.re;
    let w = (2.0 * w1 - w2) * factor;
    if w < 0.0 {
        return Err(Error::NegativeDensity { theta, weight: w });
    }
    Ok(w)
}

/// Evaluates a function holomorphic near `z` that may have removable
/// singularities at the listed points.
pub fn removable_eval(
    f: impl Fn(Complex64) -> Result<Complex64>,
    z: Complex64,
    singular: &[Complex64],
) -> Result<Complex64> {
    let near = singular.iter().any(|s| (z - s).norm() < REMOVABLE_RADIUS);
    if !near {
        return f(z);
    }
    // pick a radius whose circle keeps clear of every listed point
    let mut radius = 2.0 * REMOVABLE_RADIUS;
    for _ in 0..16 {
        let clear = singular
            .iter()
            .all(|s| ((z - s).norm() - radius).abs() >= 0.5 * REMOVABLE_RADIUS);
        if clear {
            break;
        }
        radius += 0.75 * REMOVABLE_RADIUS;
    }
    let mut sum = Complex64::new(0.0, 0.0);
    for p in circle_points(radius, MEAN_VALUE_POINTS, 0.1) {
        sum += f(z + p)?;
    }
    Ok(sum / MEAN_VALUE_POINTS as f64)
}

/// Sampled evidence that a function is a normalized Caratheodory function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CaratheodoryReport {
    pub anchor_error: f64,
    pub min_real_part: f64,
    pub holomorphy_residual: f64,
}

impl CaratheodoryFn {
    /// `F = num / den`, e.g. `psi_n^* / phi_n^*` for a system known only
    /// through its recurrence parameters.
    pub fn ratio(num: RatFun, den: RatFun, beta0: Complex64) -> Self {
        Self {
            beta0,
            kind: Kind::Ratio { num, den },
        }
    }

    /// `(-C + D F) / (A - B F)`, anchored at `beta0`; `removable` lists the
    /// points where numerator and denominator vanish together.
    pub fn transformed(
        abcd: [RatFun; 4],
        base: Arc<CaratheodoryFn>,
        beta0: Complex64,
        removable: Vec<Complex64>,
    ) -> Self {
        let [a, b, c, d] = abcd;
        Self {
            beta0,
            kind: Kind::Transformed {
                a,
                b,
                c,
                d,
                base,
                removable,
            },
        }
    }

    pub fn beta0(&self) -> Complex64 {
        self.beta0
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        if !(z.norm() < 1.0) {
            return Err(Error::Domain(format!(
                "Caratheodory functions are evaluated in the open disk, got {z}"
            )));
        }
        match &self.kind {
            Kind::Herglotz { kp, moments } => {
                let w = kp.zeta0(z)?;
                let tail = moments[1..]
                    .iter()
                    .rev()
                    .fold(Complex64::new(0.0, 0.0), |acc, m| (acc + m) * w);
                Ok(moments[0] + 2.0 * tail)
            }
            Kind::Ratio { num, den } => {
                let d = den.eval(z)?;
                if d.norm() == 0.0 {
                    return Err(Error::DenominatorVanishes(z));
                }
                Ok(num.eval(z)? / d)
            }
            Kind::Transformed {
                a,
                b,
                c,
                d,
                base,
                removable,
            } => removable_eval(
                |x| {
                    let f = base.eval(x)?;
                    let den = a.eval(x)? - b.eval(x)? * f;
                    let num = d.eval(x)? * f - c.eval(x)?;
                    if den.norm() <= 1e-300 || den.norm() < 1e-14 * num.norm() {
                        return Err(Error::DenominatorVanishes(x));
                    }
                    Ok(num / den)
                },
                z,
                removable,
            ),
        }
    }

    /// Checks `F(beta_0) = 1`, `Re F > 0` and the Cauchy-Riemann equations on
    /// the given interior points.
    pub fn validate(&self, points: &[Complex64]) -> Result<CaratheodoryReport> {
        let anchor_error = (self.eval(self.beta0)? - 1.0).norm();
        let mut min_real_part = f64::INFINITY;
        let mut holomorphy_residual: f64 = 0.0;
        let h = 1e-5;
        for &z in points {
            let v = self.eval(z)?;
            min_real_part = min_real_part.min(v.re);
            let fx = (self.eval(z + h)? - self.eval(z - h)?) / (2.0 * h);
            let iy = Complex64::new(0.0, h);
            let fy = (self.eval(z + iy)? - self.eval(z - iy)?) / (2.0 * h);
            // df/dx + i df/dy = 0 for holomorphic f
            let r = (fx + Complex64::i() * fy).norm() / (1.0 + fx.norm());
            holomorphy_residual = holomorphy_residual.max(r);
        }
        Ok(CaratheodoryReport {
            anchor_error,
            min_real_part,
            holomorphy_residual,
        })
    }
}
