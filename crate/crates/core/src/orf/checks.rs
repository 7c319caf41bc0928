use num_complex::Complex64;

use super::para::para_pair;
use super::OrfSystem;
use crate::caratheodory::{removable_eval, CaratheodoryFn};
use crate::error::{Error, Result};
use crate::kernel::KernelParams;
use crate::measure::{CircleMeasure, QuadRule};
use crate::ratfun::RatFun;

/// The rational Bernstein-Szego weight
/// `(1 - |beta_N|^2) / (|t - beta_N|^2 |phi_N(t)|^2)` of the top level, under
/// which `phi_0, ..., phi_N` are orthonormal.
pub fn bernstein_szego_measure(system: &OrfSystem) -> Result<CircleMeasure> {
    let n = system.n_max();
    let phi = system.level(n)?.phi.clone();
    let b = system.poles().beta(n);
    CircleMeasure::from_fn(format!("bernstein-szego({n})"), move |theta| {
        let t = Complex64::from_polar(1.0, theta);
        match phi.eval(t) {
            Ok(v) => (1.0 - b.norm_sqr()) / ((t - b).norm_sqr() * v.norm_sqr()),
            Err(_) => f64::NAN,
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeterminantReport {
    pub d: f64,
    pub residual: f64,
}

/// `phi_n^* psi_n + phi_n psi_n^* = d_n P_n B_n`: returns `d_n` read off at the
/// point where `P_n B_n` is largest and the relative sup residual.
pub fn determinant_residual(system: &OrfSystem, n: usize, points: &[Complex64]) -> Result<DeterminantReport> {
    let level = system.level(n)?;
    let poles = system.poles();
    let mut lhs = Vec::with_capacity(points.len());
    let mut rhs = Vec::with_capacity(points.len());
    for &z in points {
        lhs.push(level.phi_star.eval(z)? * level.psi.eval(z)? + level.phi.eval(z)? * level.psi_star.eval(z)?);
        rhs.push(poles.poisson_blaschke(n, z)?);
    }
    Ok(fit_real_multiple(&lhs, &rhs))
}

pub(crate) fn fit_real_multiple(lhs: &[Complex64], rhs: &[Complex64]) -> DeterminantReport {
    let (idx, _) = rhs.iter().enumerate().fold(
        (0, -1.0),
        |best, (i, r)| if r.norm() > best.1 { (i, r.norm()) } else { best },
    );
    let d = (lhs[idx] / rhs[idx]).re;
    let scale = lhs.iter().map(|x| x.norm()).fold(0.0, f64::max);
    let worst = lhs.iter().zip(rhs).map(|(l, r)| (l - d * r).norm()).fold(0.0, f64::max);
    DeterminantReport {
        d,
        residual: worst / scale.max(f64::MIN_POSITIVE),
    }
}

/// Interpolation residuals, all relative to `scale`.
#[derive(Debug, Clone, PartialEq)]
pub struct InterpolationReport {
    /// `|(phi_n F + psi_n)(beta_j)|`, `j < n`.
    pub first: Vec<f64>,
    /// `|(phi_n^* F - psi_n^*)(beta_j)|`, `j <= n`.
    pub second: Vec<f64>,
    /// Smallest `|g_n|` over the disk sample.
    pub g_min: f64,
    /// `|g_n(beta_n)|`.
    pub g_at_beta_n: f64,
    /// Largest mismatch between the two para lines over `tau` in `{1, i, -1, -i}`.
    pub para: f64,
    pub scale: f64,
}

impl InterpolationReport {
    pub fn max_vanishing(&self) -> f64 {
        self.first.iter().chain(&self.second).fold(0.0, |a, &b| a.max(b))
    }
}

/// Probes `(phi_n F + psi_n) = zeta_0 B_{n-1} g_n` and
/// `(phi_n^* F - psi_n^*) = zeta_0 B_n h_n` at the poles and over `points`.
pub fn interpolation_residuals(
    system: &OrfSystem,
    f: &CaratheodoryFn,
    n: usize,
    points: &[Complex64],
) -> Result<InterpolationReport> {
    let level = system.level(n)?;
    let poles = system.poles();
    let first_line = |z: Complex64| -> Result<Complex64> { Ok(level.phi.eval(z)? * f.eval(z)? + level.psi.eval(z)?) };
    let second_line =
        |z: Complex64| -> Result<Complex64> { Ok(level.phi_star.eval(z)? * f.eval(z)? - level.psi_star.eval(z)?) };

    let mut scale: f64 = 0.0;
    for &z in points {
        scale = scale.max((level.phi.eval(z)? * f.eval(z)?).norm() + level.psi.eval(z)?.norm());
    }
    let scale = scale.max(f64::MIN_POSITIVE);

    let first = (0..n)
        .map(|j| Ok(first_line(poles.beta(j))?.norm() / scale))
        .collect::<Result<Vec<_>>>()?;
    let second = (0..=n)
        .map(|j| Ok(second_line(poles.beta(j))?.norm() / scale))
        .collect::<Result<Vec<_>>>()?;

    let zeros: Vec<Complex64> = (0..n).map(|j| poles.beta(j)).collect();
    let g = |z: Complex64| -> Result<Complex64> {
        removable_eval(
            |x| {
                let den = poles.zeta0_blaschke(n as isize - 1, x)?;
                if den.norm() == 0.0 {
                    return Err(Error::DenominatorVanishes(x));
                }
                Ok(first_line(x)? / den)
            },
            z,
            &zeros,
        )
    };
    let mut g_min = f64::INFINITY;
    for &z in points {
        g_min = g_min.min(g(z)?.norm() / scale);
    }
    let g_at_beta_n = g(poles.beta(n))?.norm() / scale;

    let mut para: f64 = 0.0;
    for tau in [
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 1.0),
        Complex64::new(-1.0, 0.0),
        Complex64::new(0.0, -1.0),
    ] {
        let pair = para_pair(system, n, tau)?;
        let phi_star = pair.phi.superstar();
        let psi_star = pair.psi.superstar();
        for &z in points {
            let fz = f.eval(z)?;
            let top = pair.phi.eval(z)? * fz + pair.psi.eval(z)?;
            let bottom = phi_star.eval(z)? * fz - psi_star.eval(z)?;
            para = para.max((bottom - tau.conj() * top).norm() / scale);
        }
    }
    Ok(InterpolationReport {
        first,
        second,
        g_min,
        g_at_beta_n,
        para,
        scale,
    })
}

/// Both lines of the second-kind functional identity for
/// `f = u_*`, `u in L_{n-1}`, and `g = u_* / zeta_n`, evaluated by quadrature
/// at the given interior points. Returns the two relative sup residuals.
pub fn second_kind_functional_residual(
    system: &OrfSystem,
    rule: &QuadRule,
    n: usize,
    u: &RatFun,
    points: &[Complex64],
) -> Result<(f64, f64)> {
    let level = system.level(n)?;
    let poles = system.poles();
    let kp = KernelParams::new(poles.beta(0))?;
    let f = |z: Complex64| u.substar_eval(z);
    let g = |z: Complex64| -> Result<Complex64> {
        if n == 0 {
            return u.substar_eval(z);
        }
        Ok(u.substar_eval(z)? / poles.blaschke_factor(n, z)?)
    };
    let phi_f = |z: Complex64| -> Result<Complex64> { Ok(level.phi.eval(z)? * f(z)?) };
    let phis_g = |z: Complex64| -> Result<Complex64> { Ok(level.phi_star.eval(z)? * g(z)?) };
    let pf_t: Vec<Complex64> = rule.nodes().iter().map(|&t| phi_f(t)).collect::<Result<_>>()?;
    let pg_t: Vec<Complex64> = rule.nodes().iter().map(|&t| phis_g(t)).collect::<Result<_>>()?;
    let zt: Vec<Complex64> = rule.nodes().iter().map(|&t| kp.zeta0(t)).collect::<Result<_>>()?;

    let (mut r1, mut r2, mut s1, mut s2) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for &z in points {
        let zz = kp.zeta0(z)?;
        let (a, b) = (phi_f(z)?, phis_g(z)?);
        let mut i1 = Complex64::new(0.0, 0.0);
        let mut i2 = Complex64::new(0.0, 0.0);
        for (((&w, &x), &y), &st) in rule.weights().iter().zip(&pf_t).zip(&pg_t).zip(&zt) {
            let d = (st + zz) / (st - zz);
            i1 += w * (d * (x - a) + x);
            i2 += w * (d * (y - b) - y);
        }
        let l1 = level.psi.eval(z)? * f(z)?;
        let l2 = -level.psi_star.eval(z)? * g(z)?;
        r1 = r1.max((l1 - i1).norm());
        r2 = r2.max((l2 - i2).norm());
        s1 = s1.max(l1.norm());
        s2 = s2.max(l2.norm());
    }
    Ok((r1 / s1.max(1.0), r2 / s2.max(1.0)))
}

/// `min_{|c| = 1} sup |f - c g|` over the points, with `c` read off where `g`
/// is largest.
pub fn phase_aligned_distance(f: &RatFun, g: &RatFun, points: &[Complex64]) -> Result<f64> {
    let fv: Vec<Complex64> = points.iter().map(|&z| f.eval(z)).collect::<Result<_>>()?;
    let gv: Vec<Complex64> = points.iter().map(|&z| g.eval(z)).collect::<Result<_>>()?;
    let (idx, _) = gv.iter().enumerate().fold(
        (0, -1.0),
        |best, (i, v)| if v.norm() > best.1 { (i, v.norm()) } else { best },
    );
    let ratio = fv[idx] / gv[idx];
    let c = if ratio.norm() > 0.0 {
        ratio / ratio.norm()
    } else {
        Complex64::new(1.0, 0.0)
    };
    Ok(fv.iter().zip(&gv).map(|(a, b)| (a - c * b).norm()).fold(0.0, f64::max))
}
