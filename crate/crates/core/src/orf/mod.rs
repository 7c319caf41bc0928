//! Orthonormal rational functions, their functions of the second kind, and
//! para-orthogonal companions.

mod checks;
mod gram_schmidt;
mod para;
mod recurrence;
mod serde_repr;

use std::sync::Arc;

use num_complex::Complex64;

use crate::caratheodory::{caratheodory_from_measure, CaratheodoryFn};
use crate::error::{Error, Result};
use crate::measure::CircleMeasure;
use crate::poles::PoleSequence;
use crate::ratfun::RatFun;

pub(crate) use checks::fit_real_multiple;
pub use checks::{
    bernstein_szego_measure, determinant_residual, interpolation_residuals, phase_aligned_distance,
    second_kind_functional_residual, DeterminantReport, InterpolationReport,
};
pub use gram_schmidt::{gram_schmidt_orf, gram_schmidt_orf_with, second_kind_integral, EngineOptions};
pub use para::{para_pair, para_zeros, ParaPair};
pub use recurrence::{extract_parameters, recurrence_step, synthesize, FittedParameters};

/// One rung `{phi_n, phi_n^*, psi_n, psi_n^*}` of the ladder with its
/// recurrence parameters. Level 0 carries no `lambda` or `e`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrfLevel {
    pub n: usize,
    pub phi: RatFun,
    pub phi_star: RatFun,
    pub psi: RatFun,
    pub psi_star: RatFun,
    pub lambda: Option<Complex64>,
    pub e: Option<f64>,
    pub rho: Complex64,
    pub d: f64,
}

impl OrfLevel {
    /// `phi_0 = psi_0 = c`.
    pub fn initial(poles: Arc<PoleSequence>, c: Complex64) -> Self {
        let phi = RatFun::constant(poles, c);
        Self {
            n: 0,
            phi_star: phi.superstar(),
            psi_star: phi.superstar(),
            psi: phi.clone(),
            phi,
            lambda: None,
            e: None,
            rho: Complex64::new(1.0, 0.0),
            d: 2.0 * c.norm_sqr(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    Orthonormal,
    General,
}

#[derive(Debug, Clone)]
pub enum Source {
    Measure(CircleMeasure),
    /// A measure that was known when the system was built but has no
    /// serializable description (for example a recovered density).
    Detached(String),
    Parameters,
}

#[derive(Debug, Clone)]
pub struct OrfSystem {
    poles: Arc<PoleSequence>,
    levels: Vec<OrfLevel>,
    normalization: Normalization,
    source: Source,
}

impl OrfSystem {
    pub(crate) fn from_parts(
        poles: Arc<PoleSequence>,
        levels: Vec<OrfLevel>,
        normalization: Normalization,
        source: Source,
    ) -> Self {
        Self {
            poles,
            levels,
            normalization,
            source,
        }
    }

    pub fn poles(&self) -> &Arc<PoleSequence> {
        &self.poles
    }

    pub fn levels(&self) -> &[OrfLevel] {
        &self.levels
    }

    pub fn level(&self, n: usize) -> Result<&OrfLevel> {
        self.levels
            .get(n)
            .ok_or_else(|| Error::Domain(format!("level {n} exceeds n_max = {}", self.n_max())))
    }

    pub fn n_max(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn normalization(&self) -> Normalization {
        self.normalization
    }

    pub fn source(&self) -> &Source {
        &self.source
    }

    pub fn lambdas(&self) -> Vec<Complex64> {
        self.levels.iter().filter_map(|l| l.lambda).collect()
    }

    /// The system's Caratheodory function: the Herglotz transform of the
    /// source measure, or `psi_N^* / phi_N^*` at the top level when the system
    /// was built from parameters alone.
    pub fn caratheodory(&self) -> Result<CaratheodoryFn> {
        match &self.source {
            Source::Measure(mu) => caratheodory_from_measure(mu, self.poles.beta(0)),
            Source::Parameters | Source::Detached(_) => {
                let top = &self.levels[self.n_max()];
                Ok(CaratheodoryFn::ratio(
                    top.psi_star.clone(),
                    top.phi_star.clone(),
                    self.poles.beta(0),
                ))
            }
        }
    }

    /// The orthogonality measure: the source measure, or the rational
    /// Bernstein-Szego weight of the top level.
    pub fn measure(&self) -> Result<CircleMeasure> {
        match &self.source {
            Source::Measure(mu) => Ok(mu.clone()),
            Source::Parameters | Source::Detached(_) => bernstein_szego_measure(self),
        }
    }
}
