use std::sync::Arc;

use num_complex::Complex64;
use serde::{Serialize, Serializer};

use super::quad::{apply_transform, check_quad, transformed_caratheodory, SelfReciprocalQuad, NONZERO_TOLERANCE};
use crate::caratheodory::{weight_from_caratheodory, CaratheodoryFn};
use crate::error::{Error, Result};
use crate::grid::{circle_points, disk_points, uniform_angles};
use crate::measure::CircleMeasure;
use crate::orf::{para_pair, recurrence_step, Normalization, OrfLevel, OrfSystem, Source};
use crate::poles::PoleSequence;
use crate::ratfun::RatFun;

/// Angles at which the recovered ARF weight is tabulated for output.
pub const WEIGHT_TABLE_POINTS: usize = 256;

/// The quad `A = Psi_{k,-1}`, `B = -Phi_{k,-1}`, `C = -Psi_{k,1}`,
/// `D = Phi_{k,1}` with `N = k`, `r = 0`, `beta~_0 = beta_k`, `tau_A = 1`.
pub fn arf_quad(system: &OrfSystem, k: usize) -> Result<SelfReciprocalQuad> {
    let one = Complex64::new(1.0, 0.0);
    let minus = para_pair(system, k, -one)?;
    let plus = para_pair(system, k, one)?;
    let poles = Arc::new(system.poles().truncated(k));
    let rebase = |f: &RatFun, s: f64| RatFun::new(poles.clone(), f.numer().iter().map(|c| c * s).collect());
    let quad = SelfReciprocalQuad::new(
        [
            rebase(&minus.psi, 1.0)?,
            rebase(&minus.phi, -1.0)?,
            rebase(&plus.psi, -1.0)?,
            rebase(&plus.phi, 1.0)?,
        ],
        one,
        k,
        0,
        Arc::new(PoleSequence::new(vec![system.poles().beta(k)])?),
    )?;
    for (x, sign) in [(&quad.a, 1.0), (&quad.b, -1.0), (&quad.c, -1.0), (&quad.d, 1.0)] {
        let gap = x
            .superstar()
            .coeff_distance(&x.scale(one * sign))
            .unwrap_or(f64::INFINITY);
        if gap > 1e-12 * (1.0 + x.coeff_scale()) {
            return Err(Error::Invariant(format!(
                "ARF quad of order {k} is not self-reciprocal ({gap:e})"
            )));
        }
    }
    let scale = quad.b.coeff_scale().max(f64::MIN_POSITIVE);
    for j in 0..k {
        let b = quad.b.eval(system.poles().beta(j))?.norm() / scale;
        if b <= NONZERO_TOLERANCE {
            return Err(Error::Invariant(format!("ARF quad of order {k} has B(beta_{j}) = 0")));
        }
    }
    Ok(quad)
}

/// `phi^{(k)}_{n\k}`, `psi^{(k)}_{n\k}` and their superstars over
/// `beta_k, ..., beta_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct ArfPair {
    pub phi: RatFun,
    pub phi_star: RatFun,
    pub psi: RatFun,
    pub psi_star: RatFun,
}

/// ARFs of order `k` at level `n` through the quad transform with
/// `c_{n,k} = sqrt(d_k d_n)`.
pub fn arf_explicit(system: &OrfSystem, k: usize, n: usize) -> Result<ArfPair> {
    let f = system.caratheodory()?;
    arf_explicit_with(system, &f, k, n)
}

pub fn arf_explicit_with(system: &OrfSystem, f: &CaratheodoryFn, k: usize, n: usize) -> Result<ArfPair> {
    check_orders(system, k, n)?;
    if n == k {
        let one = RatFun::constant(
            Arc::new(system.poles().shifted(k).truncated(0)),
            Complex64::new(1.0, 0.0),
        );
        return Ok(ArfPair {
            phi: one.clone(),
            phi_star: one.clone(),
            psi: one.clone(),
            psi_star: one,
        });
    }
    let quad = arf_quad(system, k)?;
    let extra: Vec<Complex64> = (k + 1..=n).map(|i| system.poles().beta(i)).collect();
    let report = check_quad(&quad, f, &extra)?;
    if !report.orthogonality_ok() {
        return Err(Error::Invariant(format!(
            "ARF quad of order {k} fails its conditions: {report:?}"
        )));
    }
    let c = (system.level(k)?.d * system.level(n)?.d).sqrt();
    let out = apply_transform(system, &quad, Some(&report), n - k, c)?;
    Ok(ArfPair {
        phi: out.g,
        phi_star: out.h,
        psi: out.j,
        psi_star: out.k,
    })
}

fn check_orders(system: &OrfSystem, k: usize, n: usize) -> Result<()> {
    if k > n || n > system.n_max() {
        return Err(Error::Domain(format!(
            "ARF orders need k <= n <= n_max, got k = {k}, n = {n}, n_max = {}",
            system.n_max()
        )));
    }
    if system.normalization() != Normalization::Orthonormal {
        return Err(Error::Domain("ARFs are built from orthonormal systems".into()));
    }
    Ok(())
}

/// Levels `phi^{(k)}_{n\k}` for `n = k..=n_max` from the shifted recurrence
/// started at 1; entry `j` holds level `k + j`.
pub(crate) fn arf_levels(system: &OrfSystem, k: usize, n_max: usize) -> Result<(Arc<PoleSequence>, Vec<OrfLevel>)> {
    check_orders(system, k, n_max)?;
    let poles = Arc::new(system.poles().shifted(k).truncated(n_max - k));
    let mut levels = vec![OrfLevel::initial(poles.clone(), Complex64::new(1.0, 0.0))];
    for j in 1..=n_max - k {
        let base = system.level(k + j)?;
        let lambda = base
            .lambda
            .ok_or_else(|| Error::Domain(format!("level {} carries no parameter", k + j)))?;
        let next = recurrence_step(&levels[j - 1], lambda, base.rho, &poles, j)?;
        levels.push(next);
    }
    Ok((poles, levels))
}

/// `F^{(k)} = (Phi_{k,1} F + Psi_{k,1}) / (Phi_{k,-1} F + Psi_{k,-1})`,
/// checked for `F^{(k)}(beta_k) = 1` and a positive real part on a disk sample.
pub fn arf_caratheodory(system: &OrfSystem, f: &CaratheodoryFn, k: usize) -> Result<CaratheodoryFn> {
    let quad = arf_quad(system, k)?;
    let fk = transformed_caratheodory(&quad, Arc::new(f.clone()));
    let beta_k = system.poles().beta(k);
    let anchor = fk.eval(beta_k)?;
    if (anchor - 1.0).norm() > 1e-9 {
        return Err(Error::Invariant(format!("F^({k})(beta_{k}) = {anchor}, expected 1")));
    }
    for z in disk_points(0.95, 5, 12, &[], 0.0) {
        let v = fk.eval(z)?;
        if !(v.re > 0.0) {
            return Err(Error::Invariant(format!("Re F^({k})({z}) = {} is not positive", v.re)));
        }
    }
    Ok(fk)
}

/// ARFs of order `k` with their constants, Caratheodory function and the
/// measure recovered from it.
#[derive(Debug, Clone)]
pub struct ArfSystem {
    base: OrfSystem,
    order: usize,
    system: OrfSystem,
    c_nk: Vec<f64>,
    f_k: CaratheodoryFn,
    mu_k: CircleMeasure,
}

impl ArfSystem {
    pub fn base(&self) -> &OrfSystem {
        &self.base
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// The ARFs as an orthonormal system over `beta_k, beta_{k+1}, ...`;
    /// its level `j` is `phi^{(k)}_{(k+j)\k}`.
    pub fn as_system(&self) -> &OrfSystem {
        &self.system
    }

    pub fn poles(&self) -> &Arc<PoleSequence> {
        self.system.poles()
    }

    /// Level `n >= k` in the base numbering.
    pub fn level(&self, n: usize) -> Result<&OrfLevel> {
        if n < self.order {
            return Err(Error::Domain(format!(
                "ARF levels start at k = {}, got {n}",
                self.order
            )));
        }
        self.system.level(n - self.order)
    }

    pub fn n_max(&self) -> usize {
        self.order + self.system.n_max()
    }

    /// `c_{n,k}` for `n = k..=n_max`.
    pub fn c_nk(&self) -> &[f64] {
        &self.c_nk
    }

    pub fn caratheodory(&self) -> &CaratheodoryFn {
        &self.f_k
    }

    pub fn measure(&self) -> &CircleMeasure {
        &self.mu_k
    }

    /// `(theta, w)` pairs of the recovered weight on a uniform grid.
    pub fn weight_table(&self) -> Vec<(f64, f64)> {
        uniform_angles(WEIGHT_TABLE_POINTS)
            .into_iter()
            .map(|t| (t, self.mu_k.weight(t)))
            .collect()
    }
}

/// Runs the shifted recurrence from level `k` and attaches `F^{(k)}` and the
/// measure recovered from it.
pub fn arf_recurrence(system: &OrfSystem, k: usize, n_max: usize) -> Result<ArfSystem> {
    let (poles, levels) = arf_levels(system, k, n_max)?;
    let f = system.caratheodory()?;
    let f_k = arf_caratheodory(system, &f, k)?;
    let d_k = system.level(k)?.d;
    let c_nk = (k..=n_max)
        .map(|n| Ok((d_k * system.level(n)?.d).sqrt()))
        .collect::<Result<Vec<_>>>()?;
    let weight_fn = f_k.clone();
    let beta_k = system.poles().beta(k);
    let mu_k = CircleMeasure::from_fn(format!("arf-{k}"), move |theta| {
        weight_from_caratheodory(&weight_fn, beta_k, theta).unwrap_or(f64::NAN)
    })?;
    let label = format!("arf-{k}");
    Ok(ArfSystem {
        base: system.clone(),
        order: k,
        system: OrfSystem::from_parts(poles, levels, Normalization::Orthonormal, Source::Detached(label)),
        c_nk,
        f_k,
        mu_k,
    })
}

#[derive(Serialize)]
struct ArfLevelRepr<'a> {
    n: usize,
    phi: &'a [Complex64],
    phi_star: &'a [Complex64],
    psi: &'a [Complex64],
    psi_star: &'a [Complex64],
    lambda: Option<Complex64>,
    e: Option<f64>,
    rho: Complex64,
    d: f64,
}

#[derive(Serialize)]
struct WeightRepr {
    theta: Vec<f64>,
    w: Vec<f64>,
}

#[derive(Serialize)]
struct ArfRepr<'a> {
    order: usize,
    base_poles: &'a PoleSequence,
    shifted_poles: &'a PoleSequence,
    c_nk: &'a [f64],
    levels: Vec<ArfLevelRepr<'a>>,
    mu: WeightRepr,
}

impl Serialize for ArfSystem {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let (theta, w) = self.weight_table().into_iter().unzip();
        ArfRepr {
            order: self.order,
            base_poles: self.base.poles(),
            shifted_poles: self.system.poles(),
            c_nk: &self.c_nk,
            levels: self
                .system
                .levels()
                .iter()
                .map(|l| ArfLevelRepr {
                    n: l.n + self.order,
                    phi: l.phi.numer(),
                    phi_star: l.phi_star.numer(),
                    psi: l.psi.numer(),
                    psi_star: l.psi_star.numer(),
                    lambda: l.lambda,
                    e: l.e,
                    rho: l.rho,
                    d: l.d,
                })
                .collect(),
            mu: WeightRepr { theta, w },
        }
        .serialize(s)
    }
}

/// Relative sup residuals of the relations between ARFs of orders `j <= k`
/// at level `n`, for the `phi` family and its `psi` counterpart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelationReport {
    pub rel1: f64,
    pub rel2: f64,
    pub rel3: f64,
    pub rel1_psi: f64,
    pub rel2_psi: f64,
    pub rel3_psi: f64,
}

impl RelationReport {
    pub fn max(&self) -> f64 {
        [
            self.rel1,
            self.rel2,
            self.rel3,
            self.rel1_psi,
            self.rel2_psi,
            self.rel3_psi,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

const RELATION_POINTS: usize = 128;

pub fn relation_residuals(system: &OrfSystem, j: usize, k: usize, n: usize) -> Result<RelationReport> {
    if j > k {
        return Err(Error::Domain(format!("relations need j <= k, got j = {j}, k = {k}")));
    }
    let (_, lj) = arf_levels(system, j, n)?;
    let (_, lk) = arf_levels(system, k, n)?;
    let (jn, jk, kn) = (&lj[n - j], &lj[k - j], &lk[n - k]);
    let big_k = jk.d / (jk.d * jn.d).sqrt();
    let d_ratio = jn.d / jk.d;
    let poles = system.poles();

    let mut worst = [0.0f64; 6];
    let mut scale = [0.0f64; 6];
    for z in circle_points(1.0, RELATION_POINTS, 0.013) {
        let ev = |f: &RatFun| f.eval(z);
        let (pjn, pjn_s, qjn, qjn_s) = (ev(&jn.phi)?, ev(&jn.phi_star)?, ev(&jn.psi)?, ev(&jn.psi_star)?);
        let (pjk, pjk_s, qjk, qjk_s) = (ev(&jk.phi)?, ev(&jk.phi_star)?, ev(&jk.psi)?, ev(&jk.psi_star)?);
        let (pkn, pkn_s, qkn, qkn_s) = (ev(&kn.phi)?, ev(&kn.phi_star)?, ev(&kn.psi)?, ev(&kn.psi_star)?);
        let pb = poles.poisson_blaschke(n, z)? / poles.poisson_blaschke(k, z)?;

        let lhs = [
            2.0 * big_k * pjn,
            2.0 * big_k * pjn,
            2.0 * d_ratio * big_k * pb * pjk,
            2.0 * big_k * qjn,
            2.0 * big_k * qjn,
            2.0 * d_ratio * big_k * pb * qjk,
        ];
        let rhs = [
            (pjk + pjk_s) * pkn + (pjk - pjk_s) * qkn,
            (pkn + qkn) * pjk + (pkn - qkn) * pjk_s,
            (qkn_s + pkn_s) * pjn + (qkn - pkn) * pjn_s,
            (qjk + qjk_s) * qkn + (qjk - qjk_s) * pkn,
            (qkn + pkn) * qjk + (qkn - pkn) * qjk_s,
            (pkn_s + qkn_s) * qjn + (pkn - qkn) * qjn_s,
        ];
        for i in 0..6 {
            worst[i] = worst[i].max((lhs[i] - rhs[i]).norm());
            scale[i] = scale[i].max(lhs[i].norm());
        }
    }
    let r = |i: usize| worst[i] / scale[i].max(f64::MIN_POSITIVE);
    Ok(RelationReport {
        rel1: r(0),
        rel2: r(1),
        rel3: r(2),
        rel1_psi: r(3),
        rel2_psi: r(4),
        rel3_psi: r(5),
    })
}
