//! Rational functions `c(z) / pi_n(z)` over a fixed pole sequence.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::poles::{pole_tolerance, PoleSequence};
use crate::poly;

/// A member of `L_n`: numerator coefficients `c_0..c_n` over
/// `pi_n(z) = prod_{j=1..n} (1 - conj(beta_j) z)`.
///
/// The degree is declared, not inferred, so `c_n` may vanish. No common
/// factors are ever cancelled; the superstar is then a pure coefficient
/// reversal.
#[derive(Debug, Clone)]
pub struct RatFun {
    poles: Arc<PoleSequence>,
    numer: Vec<Complex64>,
}

impl PartialEq for RatFun {
    fn eq(&self, other: &Self) -> bool {
        self.same_poles(other) && self.numer == other.numer
    }
}

impl RatFun {
    pub fn new(poles: Arc<PoleSequence>, numer: Vec<Complex64>) -> Result<Self> {
        if numer.is_empty() {
            return Err(Error::Domain(
                "a rational function needs at least one coefficient".into(),
            ));
        }
        let degree = numer.len() - 1;
        if degree > poles.max_level() {
            return Err(Error::Domain(format!(
                "degree {degree} exceeds the {} available poles",
                poles.max_level()
            )));
        }
        Ok(Self { poles, numer })
    }

    pub fn constant(poles: Arc<PoleSequence>, c: Complex64) -> Self {
        Self { poles, numer: vec![c] }
    }

    pub fn zero(poles: Arc<PoleSequence>, degree: usize) -> Self {
        Self {
            poles,
            numer: vec![Complex64::new(0.0, 0.0); degree + 1],
        }
    }

    /// The Blaschke product `B_k = upsilon_k pi_k^* / pi_k` as an element of `L_k`.
    pub fn blaschke(poles: Arc<PoleSequence>, k: usize) -> Self {
        let roots: Vec<Complex64> = (1..=k).map(|j| poles.beta(j)).collect();
        let ups = poles.upsilon(k);
        let numer = poly::from_roots(&roots).into_iter().map(|c| c * ups).collect();
        Self { poles, numer }
    }

    pub fn degree(&self) -> usize {
        self.numer.len() - 1
    }

    pub fn poles(&self) -> &Arc<PoleSequence> {
        &self.poles
    }

    pub fn numer(&self) -> &[Complex64] {
        &self.numer
    }

    pub fn into_numer(self) -> Vec<Complex64> {
        self.numer
    }

    pub fn same_poles(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.poles, &other.poles) || self.poles == other.poles
    }

    /// Direct evaluation: Horner on the numerator over the product denominator.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        let n = self.degree();
        self.poles.check_poles(n, z)?;
        Ok(poly::horner(&self.numer, z) / self.poles.pi(n, z))
    }

    /// `f_*(z) = conj(f(1/conj z))`, computed as
    /// `revconj(c)(z) / prod_j (z - beta_j)` so that `z = 0` needs no limit.
    pub fn substar_eval(&self, z: Complex64) -> Result<Complex64> {
        let n = self.degree();
        let tol = pole_tolerance(z);
        for j in 1..=n {
            if (z - self.poles.beta(j)).norm() < tol {
                return Err(Error::PoleProximity {
                    z,
                    pole: self.poles.beta(j),
                });
            }
        }
        let rev: Vec<Complex64> = self.numer.iter().rev().map(|c| c.conj()).collect();
        Ok(poly::horner(&rev, z) / self.poles.pi_star(n, z))
    }

    /// `f^* = B_n f_*` with `n` the declared degree:
    /// `c'_k = upsilon_n conj(c_{n-k})` over the same denominator.
    pub fn superstar(&self) -> Self {
        let ups = self.poles.upsilon(self.degree());
        Self {
            poles: self.poles.clone(),
            numer: self.numer.iter().rev().map(|c| ups * c.conj()).collect(),
        }
    }

    pub fn scale(&self, a: Complex64) -> Self {
        Self {
            poles: self.poles.clone(),
            numer: self.numer.iter().map(|c| a * c).collect(),
        }
    }

    /// Rewrites the function over `pi_m` for `m >= degree` by multiplying the
    /// numerator with the missing factors `varpi_{n+1}..varpi_m`.
    pub fn raise_degree(&self, m: usize) -> Result<Self> {
        let n = self.degree();
        if m < n {
            return Err(Error::Domain(format!("cannot lower degree {n} to {m}")));
        }
        if m > self.poles.max_level() {
            return Err(Error::Domain(format!("degree {m} exceeds the available poles")));
        }
        let extra = poly::from_unit_factors(&self.poles.as_slice()[n + 1..=m]);
        Ok(Self {
            poles: self.poles.clone(),
            numer: poly::mul(&self.numer, &extra),
        })
    }

    /// `a f + b g` over the common denominator `pi_max(deg f, deg g)`.
    pub fn combine(a: Complex64, f: &Self, b: Complex64, g: &Self) -> Result<Self> {
        if !f.same_poles(g) {
            return Err(Error::PoleMismatch);
        }
        let m = f.degree().max(g.degree());
        let f = f.raise_degree(m)?;
        let g = g.raise_degree(m)?;
        Ok(Self {
            poles: f.poles.clone(),
            numer: f.numer.iter().zip(&g.numer).map(|(x, y)| a * x + b * y).collect(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        Self::combine(Complex64::new(1.0, 0.0), self, Complex64::new(1.0, 0.0), other)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        Self::combine(Complex64::new(1.0, 0.0), self, Complex64::new(-1.0, 0.0), other)
    }

    /// Product in `L_m . L_n`, living over the pole sequence
    /// `beta_0, beta_1..beta_m, beta'_1..beta'_n` (anchor taken from `self`).
    pub fn mul(&self, other: &Self) -> Self {
        let m = self.degree();
        let n = other.degree();
        let seq = PoleSequence::from_parts(
            self.poles.beta(0),
            self.poles.as_slice()[1..=m]
                .iter()
                .chain(&other.poles.as_slice()[1..=n])
                .copied(),
        );
        Self {
            poles: Arc::new(seq),
            numer: poly::mul(&self.numer, &other.numer),
        }
    }

    /// Largest coefficient modulus.
    pub fn coeff_scale(&self) -> f64 {
        poly::max_abs(&self.numer)
    }

    /// Coefficientwise distance; `None` when degrees or poles differ.
    pub fn coeff_distance(&self, other: &Self) -> Option<f64> {
        if self.degree() != other.degree() || !self.same_poles(other) {
            return None;
        }
        Some(
            self.numer
                .iter()
                .zip(&other.numer)
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max),
        )
    }

    /// Sup-norm distance over a set of sample points.
    pub fn grid_distance(&self, other: &Self, points: &[Complex64]) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for &z in points {
            worst = worst.max((self.eval(z)? - other.eval(z)?).norm());
        }
        Ok(worst)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::circle_points;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn seq(points: &[Complex64]) -> Arc<PoleSequence> {
        Arc::new(PoleSequence::new(points.to_vec()).unwrap())
    }

    #[test]
    fn eval_examples() {
        let p = seq(&[c(0.0, 0.0), c(0.0, 0.0)]);
        let one = RatFun::constant(p.clone(), c(1.0, 0.0));
        assert_eq!(one.eval(c(0.3, 0.1)).unwrap(), c(1.0, 0.0));
        let z = RatFun::new(p, vec![c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert_eq!(z.eval(c(0.5, 0.0)).unwrap(), c(0.5, 0.0));

        let p = seq(&[c(0.0, 0.0), c(0.5, 0.0)]);
        let f = RatFun::new(p, vec![c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert!((f.eval(c(1.0, 0.0)).unwrap() - c(2.0, 0.0)).norm() < 1e-15);
        assert!(matches!(f.eval(c(2.0, 0.0)), Err(Error::PoleProximity { .. })));
    }

    #[test]
    fn substar_examples() {
        let p = seq(&[c(0.0, 0.0), c(0.0, 0.0)]);
        let k = RatFun::constant(p.clone(), c(0.2, 0.7));
        assert_eq!(k.substar_eval(c(0.4, 0.4)).unwrap(), c(0.2, -0.7));
        let z = RatFun::new(p, vec![c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert!((z.substar_eval(c(2.0, 0.0)).unwrap() - c(0.5, 0.0)).norm() < 1e-16);
    }

    #[test]
    fn superstar_of_z_is_one() {
        let p = seq(&[c(0.0, 0.0), c(0.0, 0.0)]);
        let z = RatFun::new(p, vec![c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert_eq!(z.superstar().numer(), &[c(1.0, 0.0), c(0.0, 0.0)]);
    }

    #[test]
    fn superstar_of_first_lebesgue_orf() {
        // phi_1 = (sqrt(3)/2) z / (1 - z/2); reversal gives (sqrt(3)/2) / (1 - z/2)
        let h = 3f64.sqrt() / 2.0;
        let p = seq(&[c(0.0, 0.0), c(0.5, 0.0)]);
        let phi = RatFun::new(p.clone(), vec![c(0.0, 0.0), c(h, 0.0)]).unwrap();
        let star = phi.superstar();
        assert_eq!(star.numer(), &[c(h, 0.0), c(0.0, 0.0)]);
        for z in circle_points(0.7, 12, 0.1) {
            let via_product = p.blaschke_product(1, z).unwrap() * phi.substar_eval(z).unwrap();
            assert!((star.eval(z).unwrap() - via_product).norm() < 1e-14);
        }
    }

    #[test]
    fn combine_rebases_lower_degree() {
        let p = seq(&[c(0.0, 0.0), c(0.5, 0.0)]);
        let f = RatFun::constant(p.clone(), c(1.0, 0.0));
        let g = RatFun::new(p, vec![c(0.3, -0.1), c(0.2, 0.4)]).unwrap();
        let s = f.add(&g).unwrap();
        assert_eq!(s.numer(), &[c(1.3, -0.1), c(-0.3, 0.4)]);
        for z in circle_points(0.9, 10, 0.3) {
            let expect = f.eval(z).unwrap() + g.eval(z).unwrap();
            assert!((s.eval(z).unwrap() - expect).norm() < 1e-14);
        }
        assert_eq!(
            RatFun::combine(c(1.0, 0.0), &g, c(-1.0, 0.0), &g)
                .unwrap()
                .coeff_scale(),
            0.0
        );
        let doubled = RatFun::combine(c(2.0, 0.0), &g, c(0.0, 0.0), &g).unwrap();
        assert_eq!(doubled.numer(), &[c(0.6, -0.2), c(0.4, 0.8)]);
    }

    #[test]
    fn combine_rejects_foreign_poles() {
        let f = RatFun::constant(seq(&[c(0.0, 0.0), c(0.5, 0.0)]), c(1.0, 0.0));
        let g = RatFun::constant(seq(&[c(0.0, 0.0), c(0.4, 0.0)]), c(1.0, 0.0));
        assert_eq!(f.add(&g), Err(Error::PoleMismatch));
    }

    #[test]
    fn product_evaluates_pointwise() {
        let p = seq(&[c(0.1, 0.0), c(0.5, 0.2), c(-0.3, 0.1)]);
        let q = seq(&[c(0.0, 0.0), c(0.0, -0.6)]);
        let f = RatFun::new(p, vec![c(1.0, 0.0), c(0.2, 0.3), c(-0.4, 0.0)]).unwrap();
        let g = RatFun::new(q, vec![c(0.5, 0.5), c(1.0, 0.0)]).unwrap();
        let fg = f.mul(&g);
        assert_eq!(fg.degree(), 3);
        for z in circle_points(1.0, 16, 0.05) {
            let expect = f.eval(z).unwrap() * g.eval(z).unwrap();
            assert!((fg.eval(z).unwrap() - expect).norm() < 1e-13);
        }
    }

    fn complex_in(r: f64) -> impl Strategy<Value = Complex64> {
        (0.0..r, 0.0..std::f64::consts::TAU).prop_map(|(m, a)| Complex64::from_polar(m, a))
    }

    proptest! {
        #[test]
        fn superstar_is_an_involution_and_matches_blaschke_times_substar(
            betas in prop::collection::vec(complex_in(0.9), 1..6),
            coeffs in prop::collection::vec(complex_in(2.0), 6),
            zs in prop::collection::vec(complex_in(0.95), 8),
        ) {
            let mut pts = vec![c(0.05, -0.1)];
            pts.extend(betas);
            let n = pts.len() - 1;
            let p = seq(&pts);
            let f = RatFun::new(p.clone(), coeffs[..=n].to_vec()).unwrap();
            let back = f.superstar().superstar();
            prop_assert!(back.coeff_distance(&f).unwrap() < 1e-14 * (1.0 + f.coeff_scale()));
            let star = f.superstar();
            for z in zs {
                if (1..=n).any(|j| (z - p.beta(j)).norm() < 1e-3) {
                    continue;
                }
                let lhs = star.eval(z).unwrap();
                let rhs = p.blaschke_product(n as isize, z).unwrap() * f.substar_eval(z).unwrap();
                prop_assert!((lhs - rhs).norm() < 1e-12 * (1.0 + lhs.norm()));
            }
        }

        #[test]
        fn substar_is_conjugation_on_the_circle(
            betas in prop::collection::vec(complex_in(0.9), 1..5),
            coeffs in prop::collection::vec(complex_in(2.0), 5),
            theta in 0.0..std::f64::consts::TAU,
        ) {
            let mut pts = vec![c(0.0, 0.0)];
            pts.extend(betas);
            let n = pts.len() - 1;
            let f = RatFun::new(seq(&pts), coeffs[..=n].to_vec()).unwrap();
            let z = Complex64::from_polar(1.0, theta);
            let v = f.eval(z).unwrap();
            prop_assert!((f.substar_eval(z).unwrap() - v.conj()).norm() < 1e-12 * (1.0 + v.norm()));
        }
    }
}
