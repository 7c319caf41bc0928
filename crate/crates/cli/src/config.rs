use std::collections::BTreeMap;
use std::path::Path;

use num_complex::Complex64;
use orfkit_core::measure::resolved_grid;
use orfkit_core::orf::{gram_schmidt_orf_with, phase_aligned_distance, synthesize, EngineOptions};
use orfkit_core::{CircleMeasure, MeasureSpec, OrfSystem, PoleSequence};
use serde::Deserialize;

use crate::error::CliError;
use crate::verify::{CHECKS, GRID_TOLERANCE};

/// Environment variable overriding the quadrature grid size.
pub const GRID_ENV: &str = "ORFKIT_GRID";

const POLE_CAP: f64 = 0.9;
/// Largest level-by-level gap allowed between the measure and parameter
/// routes when a config supplies both.
const CROSS_CHECK_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    pub poles: Vec<Complex64>,
    #[serde(default)]
    pub lambdas: Option<Vec<Complex64>>,
    #[serde(default)]
    pub measure: Option<MeasureSpec>,
    pub n_max: usize,
    #[serde(default)]
    pub arf_order: Option<usize>,
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub allow_large_poles: bool,
}

impl JobConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        let cfg: Self =
            serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.poles.is_empty() {
            return Err(CliError::Config("poles must not be empty".into()));
        }
        if self.poles.len() < self.n_max + 1 {
            return Err(CliError::Config(format!(
                "n_max = {} needs {} poles, got {}",
                self.n_max,
                self.n_max + 1,
                self.poles.len()
            )));
        }
        for (k, b) in self.poles.iter().enumerate() {
            if !(b.norm() < 1.0) {
                return Err(CliError::Config(format!(
                    "pole beta_{k} = {b} is not inside the unit disk"
                )));
            }
            if b.norm() >= POLE_CAP && !self.allow_large_poles {
                return Err(CliError::Config(format!(
                    "pole beta_{k} = {b} exceeds the cap |beta| < {POLE_CAP}; set allow_large_poles to override"
                )));
            }
        }
        if let Some(lambdas) = &self.lambdas {
            if lambdas.len() != self.n_max {
                return Err(CliError::Config(format!(
                    "n_max = {} needs {} recurrence parameters, got {}",
                    self.n_max,
                    self.n_max,
                    lambdas.len()
                )));
            }
            for (i, l) in lambdas.iter().enumerate() {
                if !(l.norm() < 1.0) {
                    return Err(CliError::Config(format!(
                        "recurrence parameter lambda_{} = {l} must lie in the open unit disk",
                        i + 1
                    )));
                }
            }
        }
        if self.lambdas.is_none() && self.measure.is_none() {
            return Err(CliError::Config("a config needs a measure, lambdas, or both".into()));
        }
        if let Some(k) = self.arf_order {
            if k > self.n_max {
                return Err(CliError::Config(format!(
                    "arf_order = {k} exceeds n_max = {}",
                    self.n_max
                )));
            }
        }
        for (name, tol) in &self.tolerances {
            if !CHECKS.contains(&name.as_str()) {
                return Err(CliError::Config(format!("unknown tolerance override '{name}'")));
            }
            if !(*tol > 0.0) {
                return Err(CliError::Config(format!(
                    "tolerance for '{name}' must be positive, got {tol}"
                )));
            }
        }
        Ok(())
    }

    pub fn pole_sequence(&self) -> Result<PoleSequence, CliError> {
        Ok(PoleSequence::new(self.poles[..=self.n_max].to_vec())?)
    }

    pub fn engine_options(&self) -> Result<EngineOptions, CliError> {
        Ok(EngineOptions {
            grid: grid_override()?,
            allow_large_poles: self.allow_large_poles,
            ..EngineOptions::default()
        })
    }

    /// The measure route when a measure is given, cross-checked against the
    /// parameter route when both are present.
    pub fn build_system(&self) -> Result<OrfSystem, CliError> {
        let poles = self.pole_sequence()?;
        let from_params = match &self.lambdas {
            Some(l) => Some(synthesize(l, &poles, Complex64::new(1.0, 0.0))?),
            None => None,
        };
        let Some(spec) = &self.measure else {
            return Ok(from_params.expect("validated: lambdas present"));
        };
        let mu = CircleMeasure::from_spec(spec)?;
        let mut opts = self.engine_options()?;
        if opts.grid.is_none() {
            opts.grid = Some(resolved_grid(&mu, self.n_max, GRID_TOLERANCE));
        }
        let sys = gram_schmidt_orf_with(&mu, &poles, self.n_max, &opts)?;
        if let Some(other) = from_params {
            let grid = orfkit_core::grid::circle_points(1.0, 128, 0.0);
            for n in 0..=self.n_max {
                let gap = phase_aligned_distance(&sys.level(n)?.phi, &other.level(n)?.phi, &grid)?;
                if gap > CROSS_CHECK_TOLERANCE {
                    return Err(CliError::Numerical(format!(
                        "measure and lambdas describe different systems: phi_{n} differs by {gap:e}"
                    )));
                }
            }
        }
        Ok(sys)
    }
}

pub fn grid_override() -> Result<Option<usize>, CliError> {
    match std::env::var(GRID_ENV) {
        Ok(v) => {
            let n: usize = v
                .trim()
                .parse()
                .map_err(|_| CliError::Config(format!("{GRID_ENV} must be a positive integer, got '{v}'")))?;
            if n < 16 {
                return Err(CliError::Config(format!("{GRID_ENV} = {n} is too small")));
            }
            Ok(Some(n))
        }
        Err(_) => Ok(None),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Result<JobConfig, CliError> {
        let cfg: JobConfig = serde_json::from_str(s).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    #[test]
    fn accepts_the_lebesgue_example() {
        let cfg = parse(r#"{"poles": [[0,0],[0.5,0],[0,0]], "measure": {"type": "lebesgue"}, "n_max": 2}"#).unwrap();
        assert_eq!(cfg.seed, 0);
        assert!(cfg.lambdas.is_none());
    }

    #[test]
    fn rejects_bad_configs() {
        for s in [
            r#"{"poles": [], "measure": {"type": "lebesgue"}, "n_max": 0}"#,
            r#"{"poles": [[0,0]], "measure": {"type": "lebesgue"}, "n_max": 1}"#,
            r#"{"poles": [[0,0],[0.95,0]], "measure": {"type": "lebesgue"}, "n_max": 1}"#,
            r#"{"poles": [[0,0],[0,0]], "lambdas": [[1,0]], "n_max": 1}"#,
            r#"{"poles": [[0,0],[0,0]], "n_max": 1}"#,
            r#"{"poles": [[0,0],[0,0]], "lambdas": [[0,0]], "n_max": 1, "arf_order": 2}"#,
            r#"{"poles": [[0,0],[0,0]], "lambdas": [[0,0]], "n_max": 1, "tolerances": {"nope": 1e-3}}"#,
            r#"{"poles": [[0,0],[0,0]], "lambdas": [[0,0]], "n_max": 1, "extra": 1}"#,
        ] {
            assert!(matches!(parse(s), Err(CliError::Config(_))), "{s}");
        }
        let ok =
            r#"{"poles": [[0,0],[0.95,0]], "measure": {"type": "lebesgue"}, "n_max": 1, "allow_large_poles": true}"#;
        assert!(parse(ok).is_ok());
    }
}
