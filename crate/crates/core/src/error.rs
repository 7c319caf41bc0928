use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by the numerical routines of this crate.
///
/// Every variant names the precondition or identity that was violated so the
/// CLI can surface it verbatim.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("evaluation point {z} is within tolerance of the pole {pole}")]
    PoleProximity { z: Complex64, pole: Complex64 },

    #[error("B_-1 = 1/zeta_0 is undefined at z = beta_0 = {0}")]
    DivisionByZeroBlaschke(Complex64),

    #[error("Herglotz kernel is singular: zeta_0(t) ~ zeta_0(z) at t = {t}, z = {z}")]
    KernelSingularity { t: Complex64, z: Complex64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("rational functions live over different pole sequences")]
    PoleMismatch,

    #[error("measure weight is not strictly positive (w = {weight} at theta = {theta})")]
    NonPositiveWeight { theta: f64, weight: f64 },

    #[error("recovered density is negative (w = {weight} at theta = {theta})")]
    NegativeDensity { theta: f64, weight: f64 },

    #[error("Gram-Schmidt breakdown at level {level}: norm {norm:e} below threshold")]
    RankDeficiency { level: usize, norm: f64 },

    #[error("recurrence parameter lambda_{level} = {lambda} is not inside the unit disk")]
    ParameterOutOfDisk { level: usize, lambda: Complex64 },

    #[error("recurrence fit at level {level} has residual {residual:e} (limit {limit:e})")]
    FitResidualTooLarge { level: usize, residual: f64, limit: f64 },

    #[error("second-kind reconstruction at level {0} hit a non-finite node value")]
    InterpolationSingular(usize),

    #[error("para-orthogonal zero {zero} is off the unit circle (||z|-1| = {deviation:e})")]
    ZeroOffCircle { zero: Complex64, deviation: f64 },

    #[error("para-orthogonal zeros collide (separation {separation:e})")]
    ZeroCollision { separation: f64 },

    #[error("transform numerator is not divisible by the P_N B_N factor (remainder {remainder:e})")]
    DivisionRemainderTooLarge { remainder: f64 },

    #[error("self-reciprocal quad has not passed the transform conditions")]
    ConditionUnchecked,

    #[error("denominator of the Caratheodory transform vanishes at {0}")]
    DenominatorVanishes(Complex64),

    #[error("invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
