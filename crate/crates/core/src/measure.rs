//! Absolutely continuous probability measures on the unit circle and the
//! trapezoid quadrature that realizes the functional `L_F`.

use std::f64::consts::TAU;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::uniform_angles;
use crate::ratfun::RatFun;

/// Grid used to normalize closed-form weights that have no analytic mass.
const MASS_GRID: usize = 4096;

/// Measure description as it appears in configuration files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum MeasureSpec {
    Lebesgue,
    Poisson { alpha: Complex64 },
    Samples { theta: Vec<f64>, w: Vec<f64> },
}

type WeightFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
enum Weight {
    Lebesgue,
    Poisson(Complex64),
    Trig { theta0: f64, coeffs: Vec<Complex64> },
    Function(WeightFn),
}

/// A probability measure `w(theta) dtheta / 2pi` with continuous positive density.
#[derive(Clone)]
pub struct CircleMeasure {
    weight: Weight,
    mass: f64,
    spec: Option<MeasureSpec>,
    label: String,
}

impl fmt::Debug for CircleMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CircleMeasure")
            .field("label", &self.label)
            .field("mass", &self.mass)
            .finish()
    }
}

/// The smallest admissible quadrature size: `max(1024, 64 (n_max + 1))`,
/// rounded up to a power of two.
pub fn default_grid(n_max: usize) -> usize {
    (64 * (n_max + 1)).max(1024).next_power_of_two()
}

/// Upper limit for [`resolved_grid`].
pub const MAX_GRID: usize = 1 << 16;

/// The smallest power of two, starting from [`default_grid`], at which the
/// weight's Fourier coefficients from a quarter of the grid upwards fall below
/// `tol` relative to its mass. Rational weights whose poles sit near the circle
/// need far more nodes than the default.
pub fn resolved_grid(mu: &CircleMeasure, n_max: usize, tol: f64) -> usize {
    let mut n = default_grid(n_max);
    let mut planner = FftPlanner::new();
    while n < MAX_GRID {
        let mut buf: Vec<Complex64> = uniform_angles(n)
            .into_iter()
            .map(|t| Complex64::new(mu.weight(t), 0.0))
            .collect();
        planner.plan_fft_forward(n).process(&mut buf);
        let mass = buf[0].norm();
        let tail = buf[n / 4..=n / 2].iter().map(|c| c.norm()).fold(0.0, f64::max);
        if tail.is_finite() && tail <= tol * mass {
            return n;
        }
        n *= 2;
    }
    log::warn!(
        "weight '{}' is not resolved below tolerance {tol:e} with {MAX_GRID} nodes",
        mu.label()
    );
    MAX_GRID
}

pub fn builtin_measure(spec: &MeasureSpec) -> Result<CircleMeasure> {
    CircleMeasure::from_spec(spec)
}

impl CircleMeasure {
    pub fn lebesgue() -> Self {
        Self {
            weight: Weight::Lebesgue,
            mass: 1.0,
            spec: Some(MeasureSpec::Lebesgue),
            label: "lebesgue".into(),
        }
    }

    /// `(1 - |alpha|^2) / |e^{i theta} - alpha|^2`, already of unit mass.
    pub fn poisson(alpha: Complex64) -> Result<Self> {
        if !(alpha.norm() < 1.0) {
            return Err(Error::Domain(format!("poisson measure needs |alpha| < 1, got {alpha}")));
        }
        Ok(Self {
            weight: Weight::Poisson(alpha),
            mass: 1.0,
            spec: Some(MeasureSpec::Poisson { alpha }),
            label: format!("poisson({}, {})", alpha.re, alpha.im),
        })
    }

    /// Trigonometric interpolant through samples on a uniform angle grid.
    pub fn samples(theta: &[f64], w: &[f64]) -> Result<Self> {
        let m = theta.len();
        if m < 4 || w.len() != m {
            return Err(Error::Domain(format!(
                "sample table needs at least 4 matching entries, got {} angles and {} weights",
                m,
                w.len()
            )));
        }
        let step = TAU / m as f64;
        for (j, &t) in theta.iter().enumerate() {
            if ((t - theta[0]) - step * j as f64).abs() > 1e-9 {
                return Err(Error::Domain(format!(
                    "sample angles must be uniform with spacing 2pi/{m}; entry {j} is {t}"
                )));
            }
        }
        for (&t, &x) in theta.iter().zip(w) {
            if !(x > 0.0) {
                return Err(Error::NonPositiveWeight { theta: t, weight: x });
            }
        }
        let mut buf: Vec<Complex64> = w.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        FftPlanner::new().plan_fft_forward(m).process(&mut buf);
        let coeffs: Vec<Complex64> = buf.into_iter().map(|c| c / m as f64).collect();
        let mass = coeffs[0].re;
        let measure = Self {
            weight: Weight::Trig {
                theta0: theta[0],
                coeffs,
            },
            mass,
            spec: Some(MeasureSpec::Samples {
                theta: theta.to_vec(),
                w: w.to_vec(),
            }),
            label: format!("samples({m})"),
        };
        for t in uniform_angles(4 * m) {
            let x = measure.weight(t);
            if !(x > 0.0) {
                return Err(Error::NonPositiveWeight { theta: t, weight: x });
            }
        }
        Ok(measure)
    }

    /// A measure given by an arbitrary positive density, normalized numerically.
    pub fn from_fn(label: impl Into<String>, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Result<Self> {
        let f: WeightFn = Arc::new(f);
        let mut mass = 0.0;
        for t in uniform_angles(MASS_GRID) {
            let x = f(t);
            if !(x > 0.0) {
                return Err(Error::NonPositiveWeight { theta: t, weight: x });
            }
            mass += x;
        }
        Ok(Self {
            weight: Weight::Function(f),
            mass: mass / MASS_GRID as f64,
            spec: None,
            label: label.into(),
        })
    }

    pub fn from_spec(spec: &MeasureSpec) -> Result<Self> {
        match spec {
            MeasureSpec::Lebesgue => Ok(Self::lebesgue()),
            MeasureSpec::Poisson { alpha } => Self::poisson(*alpha),
            MeasureSpec::Samples { theta, w } => Self::samples(theta, w),
        }
    }

    pub fn spec(&self) -> Option<&MeasureSpec> {
        self.spec.as_ref()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Normalized density against `dtheta / 2pi`.
    pub fn weight(&self, theta: f64) -> f64 {
        self.raw_weight(theta) / self.mass
    }

    fn raw_weight(&self, theta: f64) -> f64 {
        match &self.weight {
            Weight::Lebesgue => 1.0,
            Weight::Poisson(alpha) => (1.0 - alpha.norm_sqr()) / (Complex64::from_polar(1.0, theta) - alpha).norm_sqr(),
            Weight::Trig { theta0, coeffs } => trig_eval(coeffs, theta - theta0),
            Weight::Function(f) => f(theta),
        }
    }

    /// Trapezoid rule with `n` equispaced nodes; `n` must be a power of two >= 256.
    pub fn quad_rule(&self, n: usize) -> Result<QuadRule> {
        if n < 256 || !n.is_power_of_two() {
            return Err(Error::Domain(format!(
                "quadrature size must be a power of two >= 256, got {n}"
            )));
        }
        let mut nodes = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        for t in uniform_angles(n) {
            let w = self.weight(t);
            if !(w > 0.0) {
                return Err(Error::NonPositiveWeight { theta: t, weight: w });
            }
            nodes.push(Complex64::from_polar(1.0, t));
            weights.push(w / n as f64);
        }
        Ok(QuadRule { nodes, weights })
    }
}

fn trig_eval(coeffs: &[Complex64], phi: f64) -> f64 {
    let m = coeffs.len();
    let half = m / 2;
    let mut s = coeffs[0].re;
    let top = if m.is_multiple_of(2) { half - 1 } else { half };
    for (k, c) in coeffs.iter().enumerate().take(top + 1).skip(1) {
        s += 2.0 * (c * Complex64::from_polar(1.0, k as f64 * phi)).re;
    }
    if m.is_multiple_of(2) {
        s += coeffs[half].re * (half as f64 * phi).cos();
    }
    s
}

/// Nodes `t_j = e^{2 pi i j / N}` and normalized weights `w(theta_j) / N`.
#[derive(Debug, Clone)]
pub struct QuadRule {
    nodes: Vec<Complex64>,
    weights: Vec<f64>,
}

impl QuadRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[Complex64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `sum_j f(t_j) w_j`.
    pub fn integrate(&self, mut f: impl FnMut(Complex64) -> Result<Complex64>) -> Result<Complex64> {
        let mut s = Complex64::new(0.0, 0.0);
        for (&t, &w) in self.nodes.iter().zip(&self.weights) {
            s += f(t)? * w;
        }
        Ok(s)
    }

    /// Inner product of two functions already sampled at the nodes.
    pub fn inner_sampled(&self, f: &[Complex64], g: &[Complex64]) -> Complex64 {
        f.iter()
            .zip(g)
            .zip(&self.weights)
            .map(|((a, b), &w)| a * b.conj() * w)
            .sum()
    }

    pub fn sample(&self, f: &RatFun) -> Result<Vec<Complex64>> {
        self.nodes.iter().map(|&t| f.eval(t)).collect()
    }

    pub fn inner(&self, f: &RatFun, g: &RatFun) -> Result<Complex64> {
        Ok(self.inner_sampled(&self.sample(f)?, &self.sample(g)?))
    }
}

/// `(1/N) sum_j f(t_j) conj(g(t_j)) w(theta_j)`.
pub fn inner_product(
    mu: &CircleMeasure,
    f: impl Fn(Complex64) -> Result<Complex64>,
    g: impl Fn(Complex64) -> Result<Complex64>,
    n: usize,
) -> Result<Complex64> {
    mu.quad_rule(n)?.integrate(|t| Ok(f(t)? * g(t)?.conj()))
}

/// Gram matrix `G[i][j] = <f_i, f_j>`.
pub fn gram_matrix(rule: &QuadRule, fs: &[RatFun]) -> Result<Vec<Vec<Complex64>>> {
    let samples: Vec<Vec<Complex64>> = fs.iter().map(|f| rule.sample(f)).collect::<Result<_>>()?;
    Ok(samples
        .iter()
        .map(|a| samples.iter().map(|b| rule.inner_sampled(a, b)).collect())
        .collect())
}

/// Largest entrywise deviation of a Gram matrix from the identity.
pub fn identity_deviation(gram: &[Vec<Complex64>]) -> f64 {
    let mut worst: f64 = 0.0;
    for (i, row) in gram.iter().enumerate() {
        for (j, g) in row.iter().enumerate() {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((g - target).norm());
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poles::PoleSequence;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn builtin_weights() {
        assert_eq!(CircleMeasure::lebesgue().weight(1.3), 1.0);
        let p0 = CircleMeasure::poisson(c(0.0, 0.0)).unwrap();
        assert!((p0.weight(2.0) - 1.0).abs() < 1e-15);
        let p = CircleMeasure::poisson(c(0.5, 0.0)).unwrap();
        assert!((p.weight(0.0) - 3.0).abs() < 1e-14);
        assert!(CircleMeasure::poisson(c(1.0, 0.0)).is_err());
    }

    #[test]
    fn quad_rule_rejects_bad_sizes() {
        let mu = CircleMeasure::lebesgue();
        assert!(mu.quad_rule(128).is_err());
        assert!(mu.quad_rule(1000).is_err());
        assert!(mu.quad_rule(256).is_ok());
        assert_eq!(default_grid(3), 1024);
        assert_eq!(default_grid(20), 2048);
    }

    #[test]
    fn resolved_grid_follows_the_weight_spectrum() {
        assert_eq!(resolved_grid(&CircleMeasure::lebesgue(), 3, 1e-13), 1024);
        assert_eq!(
            resolved_grid(&CircleMeasure::poisson(c(0.5, 0.0)).unwrap(), 3, 1e-13),
            1024
        );
        // coefficients decay like 0.97^k: 0.97^512 > 1e-13 >= 0.97^1024
        assert_eq!(
            resolved_grid(&CircleMeasure::poisson(c(0.0, 0.97)).unwrap(), 3, 1e-13),
            4096
        );
    }

    #[test]
    fn lebesgue_monomials_are_orthonormal() {
        let mu = CircleMeasure::lebesgue();
        for m in 0..5i32 {
            for n in 0..5i32 {
                let ip = inner_product(&mu, |z| Ok(z.powi(m)), |z| Ok(z.powi(n)), 512).unwrap();
                let target = if m == n { 1.0 } else { 0.0 };
                assert!((ip - target).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn geometric_series_norm() {
        // ||z/(1 - z/2)||^2 = sum 0.25^k = 4/3
        let mu = CircleMeasure::lebesgue();
        let f = |z: Complex64| Ok(z / (1.0 - 0.5 * z));
        let ip = inner_product(&mu, f, f, 1024).unwrap();
        assert!((ip - 4.0 / 3.0).norm() < 1e-12);
    }

    #[test]
    fn poisson_mass_is_one() {
        let mu = CircleMeasure::poisson(c(-0.3, 0.6)).unwrap();
        let ip = inner_product(&mu, |_| Ok(c(1.0, 0.0)), |_| Ok(c(1.0, 0.0)), 1024).unwrap();
        assert!((ip - 1.0).norm() < 1e-13);
    }

    #[test]
    fn samples_interpolate_and_normalize() {
        let theta = uniform_angles(64);
        let w: Vec<f64> = theta.iter().map(|t| 2.0 + t.cos() + 0.5 * (3.0 * t).sin()).collect();
        let mu = CircleMeasure::samples(&theta, &w).unwrap();
        for t in [0.1, 1.7, 4.4] {
            let expect = (2.0 + f64::cos(t) + 0.5 * (3.0 * t).sin()) / 2.0;
            assert!((mu.weight(t) - expect).abs() < 1e-13);
        }
        assert!(CircleMeasure::samples(&theta, &vec![0.0; 64]).is_err());
        let skewed: Vec<f64> = theta.iter().map(|t| t * 1.01).collect();
        assert!(CircleMeasure::samples(&skewed, &w).is_err());
    }

    #[test]
    fn spec_json_shapes() {
        let s: MeasureSpec = serde_json::from_str(r#"{"type":"poisson","alpha":[0.5,0.0]}"#).unwrap();
        assert_eq!(s, MeasureSpec::Poisson { alpha: c(0.5, 0.0) });
        let s: MeasureSpec = serde_json::from_str(r#"{"type":"lebesgue"}"#).unwrap();
        assert_eq!(s, MeasureSpec::Lebesgue);
    }

    #[test]
    fn hermitian_and_positive_on_random_rationals() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let mu = CircleMeasure::poisson(c(0.2, -0.4)).unwrap();
        let rule = mu.quad_rule(1024).unwrap();
        for _ in 0..10 {
            let mut pts = vec![c(0.1, 0.0)];
            for _ in 0..5 {
                pts.push(Complex64::from_polar(rng.gen_range(0.0..0.8), rng.gen_range(0.0..TAU)));
            }
            let poles = Arc::new(PoleSequence::new(pts).unwrap());
            let numer: Vec<Complex64> = (0..6)
                .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            let f = RatFun::new(poles, numer).unwrap();
            let lf = rule.integrate(|t| f.eval(t)).unwrap();
            let lf_star = rule.integrate(|t| f.substar_eval(t)).unwrap();
            assert!((lf_star - lf.conj()).norm() < 1e-13 * (1.0 + lf.norm()));
            let norm = rule.integrate(|t| Ok(f.eval(t)? * f.substar_eval(t)?)).unwrap();
            assert!(norm.re > 0.0 && norm.im.abs() < 1e-12 * norm.re);
            let fine = mu
                .quad_rule(2048)
                .unwrap()
                .integrate(|t| Ok(f.eval(t)? * f.substar_eval(t)?))
                .unwrap();
            assert!((fine - norm).norm() < 1e-12 * norm.re);
        }
    }
}
