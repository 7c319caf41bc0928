use std::sync::Arc;

use num_complex::Complex64;

use crate::caratheodory::{removable_eval, CaratheodoryFn};
use crate::error::{Error, Result};
use crate::grid::circle_points;
use crate::orf::{DeterminantReport, OrfSystem};
use crate::poles::PoleSequence;
use crate::poly;
use crate::ratfun::RatFun;

/// Relative tolerance for the vanishing conditions of a quad.
pub const QUAD_TOLERANCE: f64 = 1e-8;
/// Relative lower bound for the non-vanishing conditions.
pub const NONZERO_TOLERANCE: f64 = 1e-10;
/// Relative bound on synthetic-division remainders.
pub const REMAINDER_TOLERANCE: f64 = 1e-10;

/// Four self-reciprocal functions `A, B, C, D` in `L_N . L~_r`.
///
/// They live over the combined sequence `beta_0, beta_1..beta_N,
/// beta~_1..beta~_r`; `tilde` holds `beta~_0..beta~_r`.
#[derive(Debug, Clone, PartialEq)]
pub struct SelfReciprocalQuad {
    pub a: RatFun,
    pub b: RatFun,
    pub c: RatFun,
    pub d: RatFun,
    pub tau_a: Complex64,
    pub big_n: usize,
    pub r: usize,
    pub tilde: Arc<PoleSequence>,
}

impl SelfReciprocalQuad {
    pub fn new(abcd: [RatFun; 4], tau_a: Complex64, big_n: usize, r: usize, tilde: Arc<PoleSequence>) -> Result<Self> {
        if (tau_a.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::Domain(format!("tau_A must be unimodular, got {tau_a}")));
        }
        if tilde.len() != r + 1 {
            return Err(Error::Domain(format!(
                "tilde sequence needs r + 1 = {} points, got {}",
                r + 1,
                tilde.len()
            )));
        }
        let [a, b, c, d] = abcd;
        for f in [&b, &c, &d] {
            if !f.same_poles(&a) {
                return Err(Error::PoleMismatch);
            }
        }
        for f in [&a, &b, &c, &d] {
            if f.degree() != big_n + r {
                return Err(Error::Domain(format!(
                    "quad members must have degree N + r = {}, got {}",
                    big_n + r,
                    f.degree()
                )));
            }
        }
        let combined = a.poles();
        for j in 1..=r {
            if (combined.beta(big_n + j) - tilde.beta(j)).norm() > 0.0 {
                return Err(Error::Domain(format!(
                    "combined pole {} does not match beta~_{j}",
                    big_n + j
                )));
            }
        }
        Ok(Self {
            a,
            b,
            c,
            d,
            tau_a,
            big_n,
            r,
            tilde,
        })
    }

    /// `A = D = 1`, `B = C = 0` with `N = r = 0` and `beta~_0 = beta_0`.
    pub fn identity(beta0: Complex64) -> Result<Self> {
        let poles = Arc::new(PoleSequence::new(vec![beta0])?);
        let one = RatFun::constant(poles.clone(), Complex64::new(1.0, 0.0));
        let zero = RatFun::constant(poles.clone(), Complex64::new(0.0, 0.0));
        Self::new(
            [one.clone(), zero.clone(), zero, one],
            Complex64::new(1.0, 0.0),
            0,
            0,
            poles,
        )
    }

    fn base_points(&self) -> Vec<Complex64> {
        (0..self.big_n).map(|j| self.a.poles().beta(j)).collect()
    }

    fn fingerprint(&self) -> Complex64 {
        [&self.a, &self.b, &self.c, &self.d]
            .iter()
            .flat_map(|f| f.numer().iter().enumerate().map(|(k, c)| c * (k as f64 + 1.0)))
            .sum::<Complex64>()
            + self.tau_a
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionCheck {
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl ConditionCheck {
    fn vanishing(residual: f64, tolerance: f64) -> Self {
        Self {
            residual,
            tolerance,
            pass: residual < tolerance,
        }
    }

    fn nonzero(residual: f64, tolerance: f64) -> Self {
        Self {
            residual,
            tolerance,
            pass: residual > tolerance,
        }
    }
}

/// Per-condition residuals of a quad; non-vanishing conditions report the
/// smallest relative magnitude instead.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadReport {
    /// Superstar sign relations of `A, B, C, D`.
    pub a1: ConditionCheck,
    /// `B(beta_j) != 0` for `j < N`.
    pub a2: ConditionCheck,
    /// `A - BF` vanishes at `beta_0..beta_{N-1}`.
    pub a3: ConditionCheck,
    /// `AD - BC` vanishes at `beta_0..beta_{N-1}`.
    pub a4: ConditionCheck,
    /// `g` is nonzero at the tilde poles.
    pub a33: ConditionCheck,
    /// `AD - BC` also vanishes at the tilde poles, with a nonzero cofactor.
    pub a42: ConditionCheck,
    fingerprint: Complex64,
}

impl QuadReport {
    /// Conditions needed for membership of the transformed functions.
    pub fn membership_ok(&self) -> bool {
        self.a1.pass && self.a2.pass && self.a3.pass && self.a4.pass
    }

    /// Conditions needed for orthogonality with respect to the transformed
    /// Caratheodory function.
    pub fn orthogonality_ok(&self) -> bool {
        self.membership_ok() && self.a33.pass && self.a42.pass
    }
}

/// Numerically verifies the self-reciprocity, non-vanishing and divisibility
/// conditions of a quad against `F`. `extra` lists further points where `g`
/// must not vanish (typically `beta_{N+1}, ..., beta_{N+n}`).
pub fn check_quad(quad: &SelfReciprocalQuad, f: &CaratheodoryFn, extra: &[Complex64]) -> Result<QuadReport> {
    let tau = quad.tau_a;
    let coeff_scale = [&quad.a, &quad.b, &quad.c, &quad.d]
        .iter()
        .map(|x| x.coeff_scale())
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    let mut a1: f64 = 0.0;
    for (x, sign) in [(&quad.a, 1.0), (&quad.b, -1.0), (&quad.c, -1.0), (&quad.d, 1.0)] {
        let gap = x
            .superstar()
            .coeff_distance(&x.scale(tau * sign))
            .unwrap_or(f64::INFINITY);
        a1 = a1.max(gap / coeff_scale);
    }

    let ring = circle_points(0.95, 64, 0.05);
    let (mut s_ab, mut s_b, mut s_det) = (0.0f64, 0.0f64, 0.0f64);
    for &z in &ring {
        let fz = f.eval(z)?;
        let (a, b, c, d) = (quad.a.eval(z)?, quad.b.eval(z)?, quad.c.eval(z)?, quad.d.eval(z)?);
        s_ab = s_ab.max(a.norm() + (b * fz).norm());
        s_b = s_b.max(b.norm());
        s_det = s_det.max((a * d).norm() + (b * c).norm());
    }
    let (s_ab, s_b, s_det) = (
        s_ab.max(f64::MIN_POSITIVE),
        s_b.max(f64::MIN_POSITIVE),
        s_det.max(f64::MIN_POSITIVE),
    );

    let zeros = quad.base_points();
    let mut a2 = f64::INFINITY;
    let mut a3: f64 = 0.0;
    let mut a4: f64 = 0.0;
    for &beta in &zeros {
        a2 = a2.min(quad.b.eval(beta)?.norm() / s_b);
        a3 = a3.max((quad.a.eval(beta)? - quad.b.eval(beta)? * f.eval(beta)?).norm() / s_ab);
        a4 = a4.max(det(quad, beta)?.norm() / s_det);
    }

    let combined = quad.a.poles().clone();
    let n_big = quad.big_n as isize;
    let g = |z: Complex64| -> Result<Complex64> {
        removable_eval(
            |x| {
                let den = combined.zeta0_blaschke(n_big - 1, x)?;
                Ok((quad.a.eval(x)? - quad.b.eval(x)? * f.eval(x)?) / den)
            },
            z,
            &zeros,
        )
    };
    let mut a33 = f64::INFINITY;
    for &beta in quad.tilde.as_slice().iter().chain(extra) {
        a33 = a33.min(g(beta)?.norm() / s_ab);
    }

    let tilde_zeros: Vec<Complex64> = (0..quad.r).map(|j| quad.tilde.beta(j)).collect();
    let mut a42_vanish: f64 = 0.0;
    for &beta in &tilde_zeros {
        a42_vanish = a42_vanish.max(det(quad, beta)?.norm() / s_det);
    }
    let all_zeros: Vec<Complex64> = zeros.iter().chain(&tilde_zeros).copied().collect();
    let cofactor = |z: Complex64| -> Result<Complex64> {
        removable_eval(
            |x| {
                let mut den = combined.zeta0_blaschke(n_big - 1, x)?;
                if quad.r > 0 {
                    den *= quad.tilde.zeta0_blaschke(quad.r as isize - 1, x)?;
                }
                Ok(det(quad, x)? / den)
            },
            z,
            &all_zeros,
        )
    };
    let mut cof_max: f64 = 0.0;
    for z in circle_points(0.5, 8, 0.3) {
        cof_max = cof_max.max(cofactor(z)?.norm() / s_det);
    }
    let a42 = if cof_max > NONZERO_TOLERANCE {
        ConditionCheck::vanishing(a42_vanish, QUAD_TOLERANCE)
    } else {
        ConditionCheck {
            residual: a42_vanish,
            tolerance: QUAD_TOLERANCE,
            pass: false,
        }
    };

    Ok(QuadReport {
        a1: ConditionCheck::vanishing(a1, 1e-12),
        a2: if zeros.is_empty() {
            ConditionCheck {
                residual: f64::INFINITY,
                tolerance: NONZERO_TOLERANCE,
                pass: true,
            }
        } else {
            ConditionCheck::nonzero(a2, NONZERO_TOLERANCE)
        },
        a3: ConditionCheck::vanishing(a3, QUAD_TOLERANCE),
        a4: ConditionCheck::vanishing(a4, QUAD_TOLERANCE),
        a33: ConditionCheck::nonzero(a33, QUAD_TOLERANCE),
        a42,
        fingerprint: quad.fingerprint(),
    })
}

fn det(quad: &SelfReciprocalQuad, z: Complex64) -> Result<Complex64> {
    Ok(quad.a.eval(z)? * quad.d.eval(z)? - quad.b.eval(z)? * quad.c.eval(z)?)
}

/// The transformed functions `G, H, J, K` in `L~_{r+n}` over
/// `beta~_0..beta~_r, beta_{N+1}..beta_{N+n}`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransformOutput {
    pub g: RatFun,
    pub h: RatFun,
    pub j: RatFun,
    pub k: RatFun,
    pub tau_a: Complex64,
    pub poles: Arc<PoleSequence>,
}

/// Applies the quad to level `N + n` of `system` and divides by
/// `c P_N B_N` exactly, one linear factor at a time.
pub fn apply_transform(
    system: &OrfSystem,
    quad: &SelfReciprocalQuad,
    report: Option<&QuadReport>,
    n: usize,
    c: f64,
) -> Result<TransformOutput> {
    match report {
        Some(r) if r.fingerprint == quad.fingerprint() && r.membership_ok() => {}
        _ => return Err(Error::ConditionUnchecked),
    }
    if c == 0.0 || !c.is_finite() {
        return Err(Error::Domain(format!("transform constant must be nonzero, got {c}")));
    }
    let big_n = quad.big_n;
    let base = system.poles();
    for j in 0..=big_n.min(base.max_level()) {
        if (base.beta(j) - quad.a.poles().beta(j)).norm() > 0.0 {
            return Err(Error::PoleMismatch);
        }
    }
    let level = system.level(big_n + n)?;
    let one = Complex64::new(1.0, 0.0);
    let g = RatFun::combine(one, &level.phi.mul(&quad.a), one, &level.psi.mul(&quad.b))?;
    let j = RatFun::combine(one, &level.phi.mul(&quad.c), one, &level.psi.mul(&quad.d))?;
    let h = RatFun::combine(one, &level.phi_star.mul(&quad.a), -one, &level.psi_star.mul(&quad.b))?;
    let k = RatFun::combine(one, &level.psi_star.mul(&quad.d), -one, &level.phi_star.mul(&quad.c))?;

    let mut points = quad.tilde.as_slice().to_vec();
    points.extend((1..=n).map(|i| base.beta(big_n + i)));
    let out_poles = Arc::new(PoleSequence::new(points)?);

    let kappa = if big_n == 0 {
        one
    } else {
        base.upsilon(big_n) * base.varpi(big_n, base.beta(big_n)) / base.varpi(0, base.beta(0))
    };
    let divide = |f: RatFun| -> Result<RatFun> {
        let mut p: Vec<Complex64> = f.numer().iter().map(|x| x / (kappa * c)).collect();
        let scale = poly::max_abs(&p).max(f64::MIN_POSITIVE);
        if big_n > 0 {
            for i in 0..big_n {
                let b = base.beta(i);
                let (q, rem) = poly::div_root(&p, b);
                check_remainder(rem, scale)?;
                let (q, rem) = poly::div_unit(&q, b.conj());
                check_remainder(rem, scale)?;
                p = q;
            }
        }
        RatFun::new(out_poles.clone(), p)
    };
    let out = TransformOutput {
        g: divide(g)?,
        h: divide(h)?,
        j: divide(j)?,
        k: divide(k)?,
        tau_a: quad.tau_a,
        poles: out_poles,
    };
    for (x, y, name) in [(&out.g, &out.h, "G^* = tau_A H"), (&out.j, &out.k, "J^* = tau_A K")] {
        let gap = x
            .superstar()
            .coeff_distance(&y.scale(quad.tau_a))
            .unwrap_or(f64::INFINITY);
        if gap > 1e-10 * (1.0 + x.coeff_scale()) {
            return Err(Error::Invariant(format!("{name} fails by {gap:e}")));
        }
    }
    Ok(out)
}

fn check_remainder(rem: Complex64, scale: f64) -> Result<()> {
    let r = rem.norm() / scale;
    if r > REMAINDER_TOLERANCE {
        return Err(Error::DivisionRemainderTooLarge { remainder: r });
    }
    Ok(())
}

/// `F~ = (-C + D F) / (A - B F)`, anchored at `beta~_0`.
pub fn transformed_caratheodory(quad: &SelfReciprocalQuad, f: Arc<CaratheodoryFn>) -> CaratheodoryFn {
    CaratheodoryFn::transformed(
        [quad.a.clone(), quad.b.clone(), quad.c.clone(), quad.d.clone()],
        f,
        quad.tilde.beta(0),
        quad.base_points(),
    )
}

/// `G^* J + G J^* = d~ P~_{r+n} B~_{r+n}` over the output poles.
pub fn transform_determinant_residual(out: &TransformOutput, points: &[Complex64]) -> Result<DeterminantReport> {
    let g_star = out.g.superstar();
    let j_star = out.j.superstar();
    let m = out.g.degree();
    let mut lhs = Vec::with_capacity(points.len());
    let mut rhs = Vec::with_capacity(points.len());
    for &z in points {
        lhs.push(g_star.eval(z)? * out.j.eval(z)? + out.g.eval(z)? * j_star.eval(z)?);
        rhs.push(out.poles.poisson_blaschke(m, z)?);
    }
    Ok(crate::orf::fit_real_multiple(&lhs, &rhs))
}
